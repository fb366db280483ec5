//! Linear inequality systems over named rate variables: Fourier-Motzkin
//! elimination in exact rationals with pruning, plus 2-D vertex enumeration
//! and sampled comparison of regions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

/// Membership tolerance.
pub const EPS: f64 = 1e-9;
/// Points used by the sampling comparison in dimension >= 3.
pub const SAMPLE_POINTS: usize = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("region is unbounded")]
    Unbounded,
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Rounds to the nearest multiple of 1e-12 and returns it as an exact rational.
pub fn rat_from_f64(x: f64) -> Rat {
    let scaled = (x * 1e12).round();
    let num = BigInt::from(scaled as i128);
    Rat::new(num, BigInt::from(1_000_000_000_000i64))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerators: divide as floats
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// `sum coeffs[v] * v <= rhs`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    pub coeffs: BTreeMap<String, Rat>,
    pub rhs: Rat,
}

impl LinearInequality {
    pub fn new<S: Into<String>>(coeffs: impl IntoIterator<Item = (S, Rat)>, rhs: Rat) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in coeffs {
            let k = k.into();
            let e = map.entry(k).or_insert_with(Rat::zero);
            *e += v;
        }
        map.retain(|_, v: &mut Rat| !v.is_zero());
        LinearInequality { coeffs: map, rhs }
    }

    /// Row with integer coefficients and a float rhs rationalized at 1e-12.
    pub fn le(terms: &[(&str, i64)], rhs: f64) -> Self {
        LinearInequality::new(terms.iter().map(|&(n, c)| (n, rat_int(c))), rat_from_f64(rhs))
    }

    /// `sum terms >= rhs`, stored negated.
    pub fn ge(terms: &[(&str, i64)], rhs: f64) -> Self {
        LinearInequality::new(terms.iter().map(|&(n, c)| (n, rat_int(-c))), -rat_from_f64(rhs))
    }

    pub fn coeff(&self, var: &str) -> Rat {
        self.coeffs.get(var).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_constant() && !self.rhs.is_negative()
    }

    pub fn is_contradiction(&self) -> bool {
        self.is_constant() && self.rhs.is_negative()
    }

    pub fn rhs_f64(&self) -> f64 {
        rat_to_f64(&self.rhs)
    }

    pub fn coeff_f64(&self, var: &str) -> f64 {
        self.coeffs.get(var).map(rat_to_f64).unwrap_or(0.0)
    }

    /// Positive rescaling so the first nonzero coefficient (in `order`) has
    /// magnitude 1. Contradictions become `0 <= -1`.
    pub fn normalized(&self, order: &[String]) -> Self {
        if self.is_constant() {
            let rhs = if self.rhs.is_negative() { -Rat::one() } else { Rat::zero() };
            return LinearInequality { coeffs: BTreeMap::new(), rhs };
        }
        let lead = order
            .iter()
            .find_map(|v| self.coeffs.get(v))
            .or_else(|| self.coeffs.values().next())
            .unwrap()
            .abs();
        LinearInequality {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v / &lead)).collect(),
            rhs: &self.rhs / &lead,
        }
    }

    fn scaled_add(&self, a: &Rat, other: &Self, b: &Rat) -> Self {
        let terms = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v * a))
            .chain(other.coeffs.iter().map(|(k, v)| (k.clone(), v * b)));
        LinearInequality::new(terms, &self.rhs * a + &other.rhs * b)
    }

    fn slack_f64(&self, vars: &[String], point: &[f64]) -> f64 {
        let lhs: f64 = vars
            .iter()
            .zip(point)
            .map(|(v, x)| self.coeff_f64(v) * x)
            .sum();
        self.rhs_f64() - lhs
    }

    fn write_with(&self, order: &[String], f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for v in order {
            let Some(c) = self.coeffs.get(v) else { continue };
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{}*{v}", fmt_rat(&mag))?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " <= {}", fmt_rat(&self.rhs))
    }
}

/// Exact decimal when the denominator has only factors 2 and 5, else `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut k2, mut k5) = (0u32, 0u32);
    while (&d % &two).is_zero() {
        d /= &two;
        k2 += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        k5 += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let k = k2.max(k5);
    let scaled = r * Rat::from_integer(BigInt::from(10).pow(k));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = k as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - k as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

/// Parses `12`, `-0.5`, `1e-3`, `3/4` exactly.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a = parse_rat(a)?;
        let b = parse_rat(b)?;
        if b.is_zero() {
            return None;
        }
        return Some(a / b);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let mut r = Rat::new(digits, BigInt::from(10).pow(frac.len() as u32));
    let ten = Rat::from_integer(BigInt::from(10));
    if exp >= 0 {
        r *= num_traits::pow(ten, exp as usize);
    } else {
        r /= num_traits::pow(ten, (-exp) as usize);
    }
    Some(if neg { -r } else { r })
}

/// A finite list of `<=` rows over named variables, with an optional implicit
/// nonnegativity constraint on every variable.
///
/// Invariant: every coefficient name appears in `variables`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpaceSystem {
    pub variables: Vec<String>,
    pub rows: Vec<LinearInequality>,
    pub nonneg: bool,
}

impl HalfSpaceSystem {
    pub fn new<S: AsRef<str>>(variables: &[S], nonneg: bool) -> Self {
        HalfSpaceSystem {
            variables: variables.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
            nonneg,
        }
    }

    pub fn push(&mut self, row: LinearInequality) -> Result<(), PolyError> {
        for k in row.coeffs.keys() {
            if !self.variables.contains(k) {
                return Err(PolyError::UnknownVariable(k.clone()));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn with_rows(mut self, rows: impl IntoIterator<Item = LinearInequality>) -> Result<Self, PolyError> {
        for r in rows {
            self.push(r)?;
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    /// Rows plus the materialized `-v <= 0` rows when `nonneg` is set.
    pub fn all_rows(&self) -> Vec<LinearInequality> {
        let mut rows = self.rows.clone();
        if self.nonneg {
            for v in &self.variables {
                rows.push(LinearInequality::new([(v.as_str(), -Rat::one())], Rat::zero()));
            }
        }
        rows
    }

    pub fn is_infeasible_certificate(&self) -> bool {
        self.rows.iter().any(|r| r.is_contradiction())
    }

    /// Projects out `var`. Exact; the output keeps `nonneg` for the remaining
    /// variables and is syntactically pruned.
    pub fn fme_eliminate(&self, var: &str) -> Result<HalfSpaceSystem, PolyError> {
        if !self.variables.iter().any(|v| v == var) {
            return Err(PolyError::UnknownVariable(var.to_string()));
        }
        let mut rows = self.rows.clone();
        if self.nonneg {
            rows.push(LinearInequality::new([(var, -Rat::one())], Rat::zero()));
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            let c = r.coeff(var);
            if c.is_positive() {
                pos.push((c, r));
            } else if c.is_negative() {
                neg.push((c, r));
            } else {
                rest.push(r);
            }
        }
        for (cp, rp) in &pos {
            for (cn, rn) in &neg {
                // cp > 0, cn < 0: (-cn) * rp + cp * rn cancels var
                let mut row = rp.scaled_add(&-cn.clone(), rn, cp);
                row.coeffs.remove(var);
                rest.push(row);
            }
        }
        let variables: Vec<String> = self.variables.iter().filter(|v| *v != var).cloned().collect();
        let out = HalfSpaceSystem { variables, rows: rest, nonneg: self.nonneg };
        Ok(out.prune_syntactic())
    }

    /// Eliminates each name in turn.
    pub fn eliminate_all<S: AsRef<str>>(&self, vars: &[S]) -> Result<HalfSpaceSystem, PolyError> {
        let mut s = self.clone();
        for v in vars {
            s = s.fme_eliminate(v.as_ref())?;
        }
        Ok(s)
    }

    /// Exact feasibility: eliminate every variable and look for a
    /// contradiction. Row counts can grow quickly past a handful of variables.
    pub fn is_feasible(&self) -> bool {
        let vars = self.variables.clone();
        match self.eliminate_all(&vars) {
            Ok(s) => !s.is_infeasible_certificate(),
            Err(_) => true,
        }
    }

    /// The canonical empty system over the same variables: the single row `0 <= -1`.
    pub fn infeasible_like(&self) -> HalfSpaceSystem {
        HalfSpaceSystem {
            variables: self.variables.clone(),
            rows: vec![LinearInequality::new(Vec::<(String, Rat)>::new(), -Rat::one())],
            nonneg: false,
        }
    }

    /// Removes duplicate rows and rows dominated coefficient-wise by another
    /// row with no larger rhs. Domination compares only identical directions
    /// unless `nonneg` is set, where `c >= a` componentwise suffices.
    pub fn prune_syntactic(&self) -> HalfSpaceSystem {
        let mut rows: Vec<LinearInequality> = Vec::new();
        let mut infeasible = false;
        for r in &self.rows {
            let n = r.normalized(&self.variables);
            if n.is_trivial() {
                continue;
            }
            if n.is_contradiction() {
                infeasible = true;
                continue;
            }
            if !rows.contains(&n) {
                rows.push(n);
            }
        }
        if infeasible {
            return self.infeasible_like();
        }
        let keep: Vec<bool> = (0..rows.len())
            .map(|i| {
                !(0..rows.len()).any(|j| {
                    j != i && dominates(&rows[j], &rows[i], &self.variables, self.nonneg)
                        && !(dominates(&rows[i], &rows[j], &self.variables, self.nonneg) && i < j)
                })
            })
            .collect();
        let rows = rows.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect();
        HalfSpaceSystem { variables: self.variables.clone(), rows, nonneg: self.nonneg }
    }

    /// Syntactic pruning, followed in 2-D by an exact pass that drops any row
    /// whose removal leaves the vertex set unchanged.
    pub fn prune_redundant(&self) -> HalfSpaceSystem {
        let mut s = self.prune_syntactic();
        if s.dim() != 2 || s.is_infeasible_certificate() {
            return s;
        }
        let Ok(base) = s.vertices_exact() else { return s };
        let mut i = 0;
        while i < s.rows.len() {
            let mut t = s.clone();
            t.rows.remove(i);
            match t.vertices_exact() {
                Ok(v) if v == base => s = t,
                _ => i += 1,
            }
        }
        s
    }

    /// True iff every row (and nonnegativity, if set) holds within [`EPS`].
    pub fn contains(&self, point: &[f64]) -> Result<bool, PolyError> {
        self.contains_tol(point, EPS)
    }

    pub fn contains_tol(&self, point: &[f64], tol: f64) -> Result<bool, PolyError> {
        if point.len() != self.dim() {
            return Err(PolyError::Dimension { expected: self.dim(), got: point.len() });
        }
        if self.nonneg && point.iter().any(|&x| x < -tol) {
            return Ok(false);
        }
        Ok(self.rows.iter().all(|r| r.slack_f64(&self.variables, point) >= -tol))
    }

    /// Float copy of the rows for hot membership loops.
    pub fn compile(&self) -> CompiledSystem {
        let mut rows: Vec<(Vec<f64>, f64)> = self
            .rows
            .iter()
            .map(|r| (self.variables.iter().map(|v| r.coeff_f64(v)).collect(), r.rhs_f64()))
            .collect();
        if self.nonneg {
            for i in 0..self.dim() {
                let mut a = vec![0.0; self.dim()];
                a[i] = -1.0;
                rows.push((a, 0.0));
            }
        }
        CompiledSystem { rows }
    }

    /// Exact extreme points of a 2-D system in discovery order (not sorted).
    pub fn vertices_exact(&self) -> Result<Vec<(Rat, Rat)>, PolyError> {
        if self.dim() != 2 {
            return Err(PolyError::Dimension { expected: 2, got: self.dim() });
        }
        let (x, y) = (&self.variables[0], &self.variables[1]);
        let rows = self.all_rows();
        if rows.iter().any(|r| r.is_contradiction()) {
            return Ok(Vec::new());
        }
        let abc: Vec<(Rat, Rat, Rat)> = rows
            .iter()
            .filter(|r| !r.is_constant())
            .map(|r| (r.coeff(x), r.coeff(y), r.rhs.clone()))
            .collect();
        let feasible = |px: &Rat, py: &Rat| abc.iter().all(|(a, b, c)| a * px + b * py <= *c);
        let mut verts: Vec<(Rat, Rat)> = Vec::new();
        for i in 0..abc.len() {
            for j in i + 1..abc.len() {
                let (a1, b1, c1) = &abc[i];
                let (a2, b2, c2) = &abc[j];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    continue;
                }
                let px = (c1 * b2 - c2 * b1) / &det;
                let py = (a1 * c2 - a2 * c1) / &det;
                if feasible(&px, &py) && !verts.contains(&(px.clone(), py.clone())) {
                    verts.push((px, py));
                }
            }
        }
        // recession cone check: any nonzero d with A d <= 0 means unbounded
        let mut dirs: Vec<(Rat, Rat)> = vec![
            (Rat::one(), Rat::zero()),
            (-Rat::one(), Rat::zero()),
            (Rat::zero(), Rat::one()),
            (Rat::zero(), -Rat::one()),
        ];
        for (a, b, _) in &abc {
            dirs.push((-b.clone(), a.clone()));
            dirs.push((b.clone(), -a.clone()));
        }
        let recedes = dirs
            .iter()
            .any(|(dx, dy)| abc.iter().all(|(a, b, _)| !(a * dx + b * dy).is_positive()));
        if recedes {
            if !verts.is_empty() || line_feasible(&abc) {
                return Err(PolyError::Unbounded);
            }
            return Ok(Vec::new());
        }
        Ok(verts)
    }

    /// Vertex enumeration for a bounded 2-D system; CCW order around the centroid.
    pub fn vertices2d(&self) -> Result<Region2D, PolyError> {
        let exact = self.vertices_exact()?;
        let mut pts: Vec<(f64, f64)> = exact.iter().map(|(a, b)| (rat_to_f64(a), rat_to_f64(b))).collect();
        if pts.len() > 1 {
            let n = pts.len() as f64;
            let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
            pts.sort_by(|a, b| {
                let ta = (a.1 - cy).atan2(a.0 - cx);
                let tb = (b.1 - cy).atan2(b.0 - cx);
                ta.partial_cmp(&tb).unwrap()
            });
        }
        Ok(Region2D { system: self.clone(), vertices: pts })
    }

    /// Serializes in the `c1*R1 + c2*R2 <= b` text format. Nonnegativity, when
    /// set, is written as explicit rows.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# vars: {}\n", self.variables.join(" ")));
        for r in self.all_rows() {
            r.write_with(&self.variables, &mut out).unwrap();
            out.push('\n');
        }
        out
    }

    /// Parses the text format. `>=` rows are negated; `#` starts a comment;
    /// a `# vars: a b c` comment fixes the variable order, otherwise names are
    /// ordered by first appearance.
    pub fn parse_text(text: &str) -> Result<HalfSpaceSystem, PolyError> {
        let mut vars: Vec<String> = Vec::new();
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            if let Some(decl) = raw.trim().strip_prefix('#').map(str::trim).and_then(|c| c.strip_prefix("vars:")) {
                for v in decl.split_whitespace() {
                    if !vars.iter().any(|x| x == v) {
                        vars.push(v.to_string());
                    }
                }
                continue;
            }
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| PolyError::Parse { line: line_no, msg: msg.to_string() };
            let (lhs, rhs, flip) = if let Some((l, r)) = line.split_once("<=") {
                (l, r, false)
            } else if let Some((l, r)) = line.split_once(">=") {
                (l, r, true)
            } else {
                return Err(err("expected `<=` or `>=`"));
            };
            let rhs = parse_rat(rhs).ok_or_else(|| err("right-hand side is not a number"))?;
            let (terms, constant) = parse_linear(lhs).map_err(|m| err(&m))?;
            for (v, _) in &terms {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
            let mut row = LinearInequality::new(terms, rhs - constant);
            if flip {
                row = LinearInequality::new(
                    row.coeffs.into_iter().map(|(k, v)| (k, -v)),
                    -row.rhs,
                );
            }
            rows.push(row);
        }
        HalfSpaceSystem::new(&vars, false).with_rows(rows)
    }
}

impl fmt::Display for HalfSpaceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_linear(s: &str) -> Result<(Vec<(String, Rat)>, Rat), String> {
    let mut terms = Vec::new();
    let mut constant = Rat::zero();
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty left-hand side".into());
    }
    // split into signed chunks at top-level + / - (not inside exponents)
    let bytes = compact.as_bytes();
    let mut chunks = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        let c = bytes[i];
        let exponent = matches!(bytes[i - 1], b'e' | b'E')
            && i >= 2
            && (bytes[i - 2].is_ascii_digit() || bytes[i - 2] == b'.')
            && compact[start..i - 1].trim_start_matches(['+', '-']).chars().all(|c| c.is_ascii_digit() || c == '.');
        if (c == b'+' || c == b'-') && bytes[i - 1] != b'*' && !exponent {
            chunks.push(&compact[start..i]);
            start = i;
        }
    }
    chunks.push(&compact[start..]);
    for chunk in chunks {
        let (neg, body) = match chunk.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, chunk.strip_prefix('+').unwrap_or(chunk)),
        };
        let sign = if neg { -Rat::one() } else { Rat::one() };
        let (coef, name) = match body.split_once('*') {
            Some((c, n)) => (parse_rat(c).ok_or(format!("bad coefficient `{c}`"))?, n),
            None if is_ident(body) => (Rat::one(), body),
            None => {
                constant += sign * parse_rat(body).ok_or(format!("bad term `{body}`"))?;
                continue;
            }
        };
        if !is_ident(name) {
            return Err(format!("bad variable name `{name}`"));
        }
        terms.push((name.to_string(), sign * coef));
    }
    Ok((terms, constant))
}

fn is_ident(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// `a` implies `b` syntactically.
fn dominates(a: &LinearInequality, b: &LinearInequality, vars: &[String], nonneg: bool) -> bool {
    if a.rhs > b.rhs {
        return false;
    }
    if nonneg {
        // a.x <= rhs_a with x >= 0 and a >= b componentwise gives b.x <= a.x
        vars.iter().all(|v| a.coeff(v) >= b.coeff(v))
    } else {
        a.coeffs == b.coeffs
    }
}

/// Feasibility of a 2-D system whose normals are all parallel (no vertices).
fn line_feasible(abc: &[(Rat, Rat, Rat)]) -> bool {
    let Some((a0, b0, _)) = abc.first() else { return true };
    // every row is lambda * (a0, b0) . x <= c; bound t = (a0,b0).x
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (a, b, c) in abc {
        let lambda = if !a0.is_zero() { a / a0 } else { b / b0 };
        if (a0 * &lambda != *a) || (b0 * &lambda != *b) {
            return true;
        }
        let bound = c / &lambda;
        if lambda.is_positive() {
            hi = Some(match hi {
                Some(h) if h < bound => h,
                _ => bound,
            });
        } else {
            lo = Some(match lo {
                Some(l) if l > bound => l,
                _ => bound,
            });
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

/// Float rows `a . x <= b` including materialized nonnegativity.
#[derive(Debug, Clone)]
pub struct CompiledSystem {
    pub rows: Vec<(Vec<f64>, f64)>,
}

impl CompiledSystem {
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.rows
            .iter()
            .all(|(a, b)| a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<f64>() <= b + tol)
    }
}

/// A 2-D rate region: generating system plus CCW vertex list.
///
/// Invariants:
/// - every vertex satisfies every row within [`EPS`]
/// - no vertex is a convex combination of the others
#[derive(Debug, Clone, PartialEq)]
pub struct Region2D {
    pub system: HalfSpaceSystem,
    pub vertices: Vec<(f64, f64)>,
}

impl Region2D {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// max of w1*R1 + w2*R2 over the vertices; None when empty.
    pub fn support(&self, w1: f64, w2: f64) -> Option<f64> {
        self.vertices.iter().map(|v| w1 * v.0 + w2 * v.1).reduce(f64::max)
    }
}

/// Every vertex of `a` satisfies `b` within `tol` (valid by convexity).
pub fn is_subset(a: &Region2D, b: &HalfSpaceSystem, tol: f64) -> bool {
    a.vertices
        .iter()
        .all(|v| b.contains_tol(&[v.0, v.1], tol).unwrap_or(false))
}

pub fn region_equal(a: &Region2D, b: &Region2D, tol: f64) -> bool {
    is_subset(a, &b.system, tol) && is_subset(b, &a.system, tol)
}

/// Largest violation of `b` over the vertices of `a` (0 when contained).
pub fn subset_gap(a: &Region2D, b: &HalfSpaceSystem) -> f64 {
    let rows = b.compile().rows;
    a.vertices
        .iter()
        .flat_map(|v| rows.iter().map(move |(c, r)| c[0] * v.0 + c[1] * v.1 - r))
        .fold(0.0, f64::max)
}

/// Radical inverse of `i` in `base`.
fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Halton points in the box `[lo, hi]` (deterministic, skipping index 0).
pub fn halton_points(lo: &[f64], hi: &[f64], n: usize) -> Vec<Vec<f64>> {
    assert!(lo.len() <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
    (1..=n)
        .map(|i| {
            lo.iter()
                .zip(hi)
                .zip(PRIMES)
                .map(|((l, h), b)| l + (h - l) * radical_inverse(i, b))
                .collect()
        })
        .collect()
}

/// Number of sample points where membership in `a` and `b` differs.
/// Both systems must share the variable order.
pub fn sample_disagreements(
    a: &HalfSpaceSystem,
    b: &HalfSpaceSystem,
    lo: &[f64],
    hi: &[f64],
    n: usize,
) -> Result<usize, PolyError> {
    if a.variables != b.variables {
        let name = a
            .variables
            .iter()
            .find(|v| !b.variables.contains(v))
            .or_else(|| b.variables.iter().find(|v| !a.variables.contains(v)))
            .cloned()
            .unwrap_or_else(|| "<order>".into());
        return Err(PolyError::UnknownVariable(name));
    }
    if lo.len() != a.dim() || hi.len() != a.dim() {
        return Err(PolyError::Dimension { expected: a.dim(), got: lo.len() });
    }
    let (ca, cb) = (a.compile(), b.compile());
    Ok(halton_points(lo, hi, n)
        .iter()
        .filter(|p| ca.contains(p, EPS) != cb.contains(p, EPS))
        .count())
}

/// Approximate equality in any dimension by agreement on [`SAMPLE_POINTS`]
/// Halton points of the box.
pub fn sample_equal(a: &HalfSpaceSystem, b: &HalfSpaceSystem, lo: &[f64], hi: &[f64]) -> Result<bool, PolyError> {
    Ok(sample_disagreements(a, b, lo, hi, SAMPLE_POINTS)? == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility_is_exact() {
        let s = HalfSpaceSystem::parse_text("R1 + R2 <= 1\nR1 >= 2\nR2 >= 0\n").unwrap();
        assert!(!s.is_feasible());
        assert!(!s.eliminate_all(&["R2"]).unwrap().prune_redundant().is_feasible());
        assert!(HalfSpaceSystem::parse_text("R1 + R2 <= 1\nR1 >= 2\n").unwrap().is_feasible());
        let t = HalfSpaceSystem::parse_text("R1 + R2 <= 1\nR1 >= 1\n").unwrap();
        assert!(t.is_feasible());
        assert_eq!(s.infeasible_like().to_text(), "# vars: R1 R2\n0 <= -1\n");
    }

    fn sys(text: &str) -> HalfSpaceSystem {
        HalfSpaceSystem::parse_text(text).unwrap()
    }

    #[test]
    fn single_pairing() {
        let s = sys("x + y <= 2\n-y <= 0\n");
        let e = s.fme_eliminate("y").unwrap();
        assert_eq!(e.variables, vec!["x"]);
        assert_eq!(e.rows, vec![LinearInequality::new([("x", rat_int(1))], rat_int(2))]);
    }

    #[test]
    fn contradiction_surfaces() {
        let s = sys("# vars: x y\ny <= 1\n-y <= -2\n");
        let e = s.fme_eliminate("y").unwrap();
        assert!(e.is_infeasible_certificate());
        assert_eq!(e.to_text().lines().nth(1), Some("0 <= -1"));
        assert!(matches!(s.fme_eliminate("z"), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn prune_examples() {
        let s = sys("x <= 1\nx <= 2\n").prune_redundant();
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0].rhs, rat_int(1));
        let d = sys("x <= 1\nx <= 1\n2*x <= 2\n").prune_redundant();
        assert_eq!(d.rows.len(), 1);
    }

    #[test]
    fn nonneg_domination() {
        let mut s = HalfSpaceSystem::new(&["a", "b"], true);
        s.push(LinearInequality::le(&[("a", 1), ("b", 1)], 1.0)).unwrap();
        s.push(LinearInequality::le(&[("a", 1)], 1.0)).unwrap();
        let p = s.prune_syntactic();
        assert_eq!(p.rows.len(), 1);
        // without nonneg the same row is not implied
        s.nonneg = false;
        assert_eq!(s.prune_syntactic().rows.len(), 2);
    }

    #[test]
    fn unit_square_vertices() {
        let mut s = HalfSpaceSystem::new(&["R1", "R2"], true);
        s.push(LinearInequality::le(&[("R1", 1)], 1.0)).unwrap();
        s.push(LinearInequality::le(&[("R2", 1)], 1.0)).unwrap();
        let r = s.vertices2d().unwrap();
        assert_eq!(r.vertices, vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!(s.contains(&[0.5, 0.5]).unwrap());
        assert!(!s.contains(&[1.1, 0.0]).unwrap());
        assert!(s.contains(&[1.0 + 1e-10, 0.0]).unwrap());
        assert!(matches!(s.contains(&[0.5]), Err(PolyError::Dimension { .. })));
    }

    #[test]
    fn pentagon_vertices() {
        let mut s = HalfSpaceSystem::new(&["R1", "R2"], true);
        s.push(LinearInequality::le(&[("R1", 1)], 1.0)).unwrap();
        s.push(LinearInequality::le(&[("R2", 1)], 1.0)).unwrap();
        s.push(LinearInequality::le(&[("R1", 1), ("R2", 1)], 1.5)).unwrap();
        let r = s.vertices2d().unwrap();
        assert_eq!(
            r.vertices,
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)]
        );
        assert_eq!(r.support(1.0, 1.0), Some(1.5));
    }

    #[test]
    fn unbounded_and_empty() {
        let s = HalfSpaceSystem::new(&["R1", "R2"], true)
            .with_rows([LinearInequality::le(&[("R1", 1)], 1.0)])
            .unwrap();
        assert_eq!(s.vertices2d(), Err(PolyError::Unbounded));
        let strip = sys("# vars: x y\nx <= 1\n-x <= 1\n");
        assert_eq!(strip.vertices2d(), Err(PolyError::Unbounded));
        let empty_strip = sys("# vars: x y\nx <= -1\n-x <= -1/2\n");
        assert!(empty_strip.vertices2d().unwrap().is_empty());
        let e = HalfSpaceSystem::new(&["R1", "R2"], true)
            .with_rows([LinearInequality::le(&[("R1", 1), ("R2", 1)], -1.0)])
            .unwrap();
        assert!(e.vertices2d().unwrap().is_empty());
    }

    #[test]
    fn subset_and_equality() {
        let sq = |c: f64| {
            HalfSpaceSystem::new(&["R1", "R2"], true)
                .with_rows([
                    LinearInequality::le(&[("R1", 1)], c),
                    LinearInequality::le(&[("R2", 1)], c),
                ])
                .unwrap()
        };
        let a = sq(1.0).vertices2d().unwrap();
        let b = sq(2.0).vertices2d().unwrap();
        assert!(is_subset(&a, &a.system, EPS));
        assert!(!is_subset(&b, &a.system, EPS));
        assert!(region_equal(&a, &a.clone(), EPS));
        let mut pent = sq(1.0);
        pent.push(LinearInequality::le(&[("R1", 1), ("R2", 1)], 1.5)).unwrap();
        assert!(!region_equal(&a, &pent.vertices2d().unwrap(), EPS));
        assert!((subset_gap(&b, &a.system) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_pass_drops_redundant_sum_row() {
        let mut s = HalfSpaceSystem::new(&["R1", "R2"], true);
        s.push(LinearInequality::le(&[("R1", 1)], 1.0)).unwrap();
        s.push(LinearInequality::le(&[("R2", 1)], 1.0)).unwrap();
        s.push(LinearInequality::le(&[("R1", 1), ("R2", 1)], 3.0)).unwrap();
        assert_eq!(s.prune_redundant().rows.len(), 2);
    }

    #[test]
    fn text_roundtrip() {
        let t = "# vars: R1 R2\nR1 + 2*R2 <= 3/7\n-R1 - 0.5*R2 <= -1e-3\nR2 >= 0.25 # tail comment\n";
        let s = HalfSpaceSystem::parse_text(t).unwrap();
        assert_eq!(s.rows[2], LinearInequality::new([("R2", rat_int(-1))], parse_rat("-0.25").unwrap()));
        let back = HalfSpaceSystem::parse_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert_eq!(
            s.to_text(),
            "# vars: R1 R2\nR1 + 2*R2 <= 3/7\n-R1 - 0.5*R2 <= -0.001\n-R2 <= -0.25\n"
        );
        let err = HalfSpaceSystem::parse_text("R1 <= 1\nR1 = 2\n").unwrap_err();
        assert_eq!(err, PolyError::Parse { line: 2, msg: "expected `<=` or `>=`".into() });
        assert!(HalfSpaceSystem::parse_text("2*3 <= x").is_err());
    }

    #[test]
    fn rat_formatting() {
        assert_eq!(fmt_rat(&parse_rat("-0.05").unwrap()), "-0.05");
        assert_eq!(fmt_rat(&parse_rat("12").unwrap()), "12");
        assert_eq!(fmt_rat(&parse_rat("1/3").unwrap()), "1/3");
        assert_eq!(fmt_rat(&rat_from_f64(0.833455)), "0.833455");
        assert_eq!(parse_rat("1.5e2"), Some(rat_int(150)));
        assert_eq!(parse_rat("abc"), None);
    }

    #[test]
    fn halton_is_deterministic_and_in_box() {
        let a = halton_points(&[0.0, -1.0], &[1.0, 1.0], 100);
        let b = halton_points(&[0.0, -1.0], &[1.0, 1.0], 100);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| (0.0..1.0).contains(&p[0]) && (-1.0..1.0).contains(&p[1])));
        assert!((a[0][0] - 0.5).abs() < 1e-15);
    }
}
