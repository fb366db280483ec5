//! Finite-alphabet joint pmfs and information measures in bits.

use std::collections::HashSet;

use thiserror::Error;

/// Entries below this are treated as exact zero in every log evaluation.
pub const ZERO_CUTOFF: f64 = 1e-15;
/// Normalization tolerance for a joint table.
pub const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("alphabet `{0}` has size 0")]
    EmptyAlphabet(String),
    #[error("variable set is empty")]
    EmptyVars,
    #[error("variable sets overlap on `{0}`")]
    Overlap(String),
    #[error("table has {got} entries, alphabets need {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("negative or non-finite entry {0}")]
    BadEntry(f64),
    #[error("entries sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("probability {0} outside [0,1]")]
    OutOfRange(f64),
    #[error("({0}, {1}) is not a point of the 2-simplex")]
    NotSimplex(f64, f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    pub name: String,
    pub size: usize,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Alphabet { name: name.into(), size }
    }
}

/// Dense joint pmf over a labeled product of alphabets, row-major
/// (last variable varies fastest).
///
/// Invariants:
/// - variable names are unique, every size is at least 1
/// - entries are finite and nonnegative
/// - entries sum to 1 within [`SUM_TOL`]
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    vars: Vec<Alphabet>,
    table: Vec<f64>,
}

impl JointPmf {
    pub fn new(vars: Vec<Alphabet>, table: Vec<f64>) -> Result<Self, ProbError> {
        let mut seen = HashSet::new();
        for a in &vars {
            if a.size == 0 {
                return Err(ProbError::EmptyAlphabet(a.name.clone()));
            }
            if !seen.insert(a.name.as_str()) {
                return Err(ProbError::DuplicateVariable(a.name.clone()));
            }
        }
        let expected: usize = vars.iter().map(|a| a.size).product();
        if table.len() != expected {
            return Err(ProbError::TableSize { expected, got: table.len() });
        }
        let mut sum = 0.0;
        for &v in &table {
            if !v.is_finite() || v < 0.0 {
                return Err(ProbError::BadEntry(v));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(ProbError::NotNormalized(sum));
        }
        Ok(JointPmf { vars, table })
    }

    /// Builds the table by calling `f` on every multi-index.
    pub fn from_fn(
        vars: Vec<Alphabet>,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self, ProbError> {
        let sizes: Vec<usize> = vars.iter().map(|a| a.size).collect();
        let total: usize = sizes.iter().product();
        let mut table = Vec::with_capacity(total);
        let mut idx = vec![0usize; sizes.len()];
        for _ in 0..total {
            table.push(f(&idx));
            odometer(&mut idx, &sizes);
        }
        JointPmf::new(vars, table)
    }

    pub fn variables(&self) -> &[Alphabet] {
        &self.vars
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.vars.iter().map(|a| a.size).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|a| a.name.as_str()).collect()
    }

    pub fn has(&self, name: &str) -> bool {
        self.vars.iter().any(|a| a.name == name)
    }

    pub fn position(&self, name: &str) -> Result<usize, ProbError> {
        self.vars
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| ProbError::UnknownVariable(name.to_string()))
    }

    /// Probability of one cell, indexed in declared variable order.
    pub fn get(&self, idx: &[usize]) -> f64 {
        let mut flat = 0;
        for (a, &i) in self.vars.iter().zip(idx) {
            flat = flat * a.size + i;
        }
        self.table[flat]
    }

    /// Sums out every variable not in `keep`. The result lists variables in
    /// the order given by `keep`.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf, ProbError> {
        let pos = self.positions(keep)?;
        let table = self.marginal_table(&pos);
        let vars = pos.iter().map(|&p| self.vars[p].clone()).collect();
        Ok(JointPmf { vars, table })
    }

    /// Entropy H(vars) in bits.
    pub fn entropy(&self, vars: &[&str]) -> Result<f64, ProbError> {
        if vars.is_empty() {
            return Err(ProbError::EmptyVars);
        }
        let pos = self.positions(vars)?;
        Ok(entropy_of(&self.marginal_table(&pos)))
    }

    /// H(vars) with the empty set allowed (H(empty) = 0).
    fn entropy0(&self, vars: &[&str]) -> Result<f64, ProbError> {
        if vars.is_empty() {
            Ok(0.0)
        } else {
            self.entropy(vars)
        }
    }

    /// H(a | c).
    pub fn cond_entropy(&self, a: &[&str], c: &[&str]) -> Result<f64, ProbError> {
        check_disjoint(&[a, c])?;
        if a.is_empty() {
            return Err(ProbError::EmptyVars);
        }
        let ac: Vec<&str> = a.iter().chain(c).copied().collect();
        Ok(self.entropy(&ac)? - self.entropy0(c)?)
    }

    /// I(a; b | c) = H(a|c) + H(b|c) - H(a,b|c). Values in [-1e-10, 0) clamp to 0.
    pub fn cond_mutual_info(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64, ProbError> {
        check_disjoint(&[a, b, c])?;
        if a.is_empty() || b.is_empty() {
            return Err(ProbError::EmptyVars);
        }
        let ac: Vec<&str> = a.iter().chain(c).copied().collect();
        let bc: Vec<&str> = b.iter().chain(c).copied().collect();
        let abc: Vec<&str> = a.iter().chain(b).chain(c).copied().collect();
        let v = self.entropy(&ac)? + self.entropy(&bc)? - self.entropy(&abc)? - self.entropy0(c)?;
        Ok(if v < 0.0 && v >= -1e-10 { 0.0 } else { v })
    }

    pub fn mutual_info(&self, a: &[&str], b: &[&str]) -> Result<f64, ProbError> {
        self.cond_mutual_info(a, b, &[])
    }

    fn positions(&self, names: &[&str]) -> Result<Vec<usize>, ProbError> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let p = self.position(n)?;
            if out.contains(&p) {
                return Err(ProbError::DuplicateVariable(n.to_string()));
            }
            out.push(p);
        }
        Ok(out)
    }

    fn marginal_table(&self, keep: &[usize]) -> Vec<f64> {
        let sizes = self.sizes();
        // output stride of each input dimension (0 when summed out)
        let mut out_stride = vec![0usize; sizes.len()];
        let mut s = 1;
        for &p in keep.iter().rev() {
            out_stride[p] = s;
            s *= sizes[p];
        }
        let mut out = vec![0.0; s];
        if keep.len() == sizes.len() && keep.iter().enumerate().all(|(i, &p)| i == p) {
            out.copy_from_slice(&self.table);
            return out;
        }
        let mut idx = vec![0usize; sizes.len()];
        let mut o = 0usize;
        let last = sizes.len() - 1;
        for &v in &self.table {
            out[o] += v;
            // odometer step with incremental output index
            let mut d = last;
            loop {
                idx[d] += 1;
                o += out_stride[d];
                if idx[d] < sizes[d] {
                    break;
                }
                o -= out_stride[d] * sizes[d];
                idx[d] = 0;
                if d == 0 {
                    break;
                }
                d -= 1;
            }
        }
        out
    }
}

pub(crate) fn odometer(idx: &mut [usize], sizes: &[usize]) {
    for d in (0..sizes.len()).rev() {
        idx[d] += 1;
        if idx[d] < sizes[d] {
            return;
        }
        idx[d] = 0;
    }
}

fn check_disjoint(sets: &[&[&str]]) -> Result<(), ProbError> {
    let mut seen = HashSet::new();
    for s in sets {
        for n in *s {
            if !seen.insert(*n) {
                return Err(ProbError::Overlap(n.to_string()));
            }
        }
    }
    Ok(())
}

/// -sum p log2 p over a table, skipping entries below [`ZERO_CUTOFF`].
pub fn entropy_of(table: &[f64]) -> f64 {
    table
        .iter()
        .filter(|&&p| p > ZERO_CUTOFF)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// x log2(1/x) with 0 log 0 = 0.
pub fn xlog1x(x: f64) -> f64 {
    if x > ZERO_CUTOFF {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Unchecked h(a) for closed-form evaluation; `a` is clamped into [0,1].
pub fn h(a: f64) -> f64 {
    let a = a.clamp(0.0, 1.0);
    xlog1x(a) + xlog1x(1.0 - a)
}

/// a(1-b) + (1-a)b without range checks.
pub fn conv(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + (1.0 - a) * b
}

fn check_prob(a: f64) -> Result<(), ProbError> {
    if (0.0..=1.0).contains(&a) {
        Ok(())
    } else {
        Err(ProbError::OutOfRange(a))
    }
}

/// Binary entropy h(a) = -a log2 a - (1-a) log2 (1-a).
pub fn binary_entropy(a: f64) -> Result<f64, ProbError> {
    check_prob(a)?;
    Ok(h(a))
}

/// Binary convolution a*b = a(1-b) + (1-a)b.
pub fn binary_convolve(a: f64, b: f64) -> Result<f64, ProbError> {
    check_prob(a)?;
    check_prob(b)?;
    Ok(conv(a, b).clamp(0.0, 1.0))
}

/// Entropy of (a, b, 1-a-b).
pub fn ternary_entropy(a: f64, b: f64) -> Result<f64, ProbError> {
    if !(a >= 0.0 && b >= 0.0 && a + b <= 1.0 + 1e-12) {
        return Err(ProbError::NotSimplex(a, b));
    }
    Ok(xlog1x(a) + xlog1x(b) + xlog1x((1.0 - a - b).max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(sizes: &[(&str, usize)]) -> JointPmf {
        let vars: Vec<Alphabet> = sizes.iter().map(|&(n, s)| Alphabet::new(n, s)).collect();
        let total: usize = sizes.iter().map(|s| s.1).product();
        JointPmf::new(vars, vec![1.0 / total as f64; total]).unwrap()
    }

    // (X1, Z1, Y) with Y = X1 xor Z1
    fn bsc(eps: f64) -> JointPmf {
        let vars = vec![Alphabet::new("X", 2), Alphabet::new("Z", 2), Alphabet::new("Y", 2)];
        JointPmf::from_fn(vars, |i| {
            let pz = if i[1] == 1 { eps } else { 1.0 - eps };
            if i[2] == i[0] ^ i[1] {
                0.5 * pz
            } else {
                0.0
            }
        })
        .unwrap()
    }

    #[test]
    fn rejects_bad_tables() {
        let v = vec![Alphabet::new("A", 2)];
        assert!(matches!(JointPmf::new(v.clone(), vec![0.5]), Err(ProbError::TableSize { .. })));
        assert!(matches!(JointPmf::new(v.clone(), vec![0.7, 0.7]), Err(ProbError::NotNormalized(_))));
        assert!(matches!(JointPmf::new(v.clone(), vec![1.5, -0.5]), Err(ProbError::BadEntry(_))));
        let dup = vec![Alphabet::new("A", 1), Alphabet::new("A", 1)];
        assert!(matches!(JointPmf::new(dup, vec![1.0]), Err(ProbError::DuplicateVariable(_))));
        assert!(matches!(
            JointPmf::new(vec![Alphabet::new("A", 0)], vec![]),
            Err(ProbError::EmptyAlphabet(_))
        ));
    }

    #[test]
    fn marginalize_uniform_and_identity() {
        let u = uniform(&[("A", 2), ("B", 2)]);
        let m = u.marginalize(&["A"]).unwrap();
        assert_eq!(m.table(), &[0.5, 0.5]);
        let same = u.marginalize(&["A", "B"]).unwrap();
        assert_eq!(same, u);
        assert!(matches!(u.marginalize(&["C"]), Err(ProbError::UnknownVariable(_))));
    }

    #[test]
    fn marginalize_reorders() {
        let vars = vec![Alphabet::new("A", 2), Alphabet::new("B", 3)];
        let p = JointPmf::from_fn(vars, |i| (1 + i[0] * 3 + i[1]) as f64 / 21.0).unwrap();
        let q = p.marginalize(&["B", "A"]).unwrap();
        for a in 0..2 {
            for b in 0..3 {
                assert!((q.get(&[b, a]) - p.get(&[a, b])).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn entropy_examples() {
        let u = uniform(&[("A", 4)]);
        assert!((u.entropy(&["A"]).unwrap() - 2.0).abs() < 1e-12);
        let point = JointPmf::new(vec![Alphabet::new("A", 3)], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(point.entropy(&["A"]).unwrap(), 0.0);
        let b = JointPmf::new(vec![Alphabet::new("A", 2)], vec![0.25, 0.75]).unwrap();
        assert!((b.entropy(&["A"]).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-12);
        assert_eq!(u.entropy(&[]), Err(ProbError::EmptyVars));
    }

    #[test]
    fn mutual_info_examples() {
        let u = uniform(&[("A", 2), ("B", 3)]);
        assert!(u.mutual_info(&["A"], &["B"]).unwrap().abs() < 1e-12);
        let copy = JointPmf::new(
            vec![Alphabet::new("A", 2), Alphabet::new("B", 2)],
            vec![0.3, 0.0, 0.0, 0.7],
        )
        .unwrap();
        let ha = copy.entropy(&["A"]).unwrap();
        assert!((copy.mutual_info(&["A"], &["B"]).unwrap() - ha).abs() < 1e-12);
        // 1 - h(0.05), frozen from the closed form
        let c = bsc(0.05);
        assert!((c.mutual_info(&["X"], &["Y"]).unwrap() - 0.713_603_042_884_044_4).abs() < 1e-9);
        assert!(matches!(
            c.cond_mutual_info(&["X"], &["X"], &[]),
            Err(ProbError::Overlap(_))
        ));
    }

    #[test]
    fn scalar_helpers() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!((binary_entropy(0.05).unwrap() - 0.286_396_957_115_955_6).abs() < 1e-12);
        assert!(binary_entropy(1.2).is_err());
        assert!((binary_convolve(0.05, 0.05).unwrap() - 0.095).abs() < 1e-15);
        assert!((binary_convolve(0.3, 0.2).unwrap() - 0.38).abs() < 1e-15);
        assert_eq!(binary_convolve(0.3, 0.0).unwrap(), 0.3);
        assert!(binary_convolve(-0.1, 0.2).is_err());
        assert!((ternary_entropy(1.0 / 3.0, 1.0 / 3.0).unwrap() - 3f64.log2()).abs() < 1e-12);
        assert_eq!(ternary_entropy(1.0, 0.0).unwrap(), 0.0);
        assert!((ternary_entropy(0.25, 0.25).unwrap() - 1.5).abs() < 1e-12);
        assert!(ternary_entropy(0.7, 0.7).is_err());
    }
}
