use bcmsr::bounds::{inner1_rows, inner2_rows, nofeedback_rows};
use bcmsr::channels::*;
use bcmsr::polyregion::{is_subset, region_equal, EPS};

const GRID5: [f64; 5] = [0.0, 0.125, 0.25, 0.375, 0.5];

fn bw_grid() -> Vec<BlackwellParams> {
    let mut out = Vec::new();
    for &p in &[0.0, 0.05, 0.2, 0.5] {
        for &(a, b) in &[(0.0, 0.0), (0.2, 0.3), (1.0 / 3.0, 1.0 / 3.0), (0.5, 0.5), (1.0, 0.0), (0.1, 0.8)] {
            out.push(BlackwellParams::new(p, a, b));
        }
    }
    out
}

#[test]
fn dueck_inner1_key_and_sum_rows_match() {
    for case in [NoiseCase::Chain, NoiseCase::Star] {
        for &p in &GRID5 {
            for &q in &GRID5 {
                for &r in &GRID5 {
                    let prm = DueckParams::new(case, p, q, r);
                    let gen = inner1_rows(&dueck_distribution(&prm).unwrap()).unwrap();
                    let closed = dueck_closed_inner1_rows(&prm).unwrap();
                    for l in ["key1", "key2", "sum"] {
                        let d = (gen.get(l).unwrap() - closed.get(l).unwrap()).abs();
                        assert!(d < 1e-9, "{case:?} {p} {q} {r} {l}: {d:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn blackwell_inner1_rows_match() {
    for prm in bw_grid() {
        let gen = inner1_rows(&blackwell_distribution(&prm).unwrap()).unwrap();
        let closed = blackwell_closed_inner1_rows(&prm).unwrap();
        for l in ["key1", "key2", "plain1", "plain2"] {
            let d = (gen.get(l).unwrap() - closed.get(l).unwrap()).abs();
            assert!(d < 1e-9, "{prm:?} {l}: {d:e}");
        }
    }
}

#[test]
fn blackwell_inner2_matches_with_noise_pair_extension() {
    for prm in bw_grid() {
        let gen = inner2_rows(&blackwell_extended(&prm).unwrap()).unwrap();
        let closed = blackwell_closed_inner2_rows(&prm).unwrap();
        let dev = closed.max_deviation(&gen);
        assert!(dev < 1e-9, "{prm:?}: {:?}", closed.deviations(&gen));
    }
}

#[test]
fn blackwell_nofeedback_matches() {
    for prm in bw_grid() {
        let gen = nofeedback_rows(&blackwell_distribution(&prm).unwrap()).unwrap();
        let closed = blackwell_closed_nofeedback_rows(&prm).unwrap();
        assert!(closed.max_deviation(&gen) < 1e-9, "{prm:?}");
    }
}

#[test]
fn dueck_closed_inclusion_chain() {
    for case in [NoiseCase::Chain, NoiseCase::Star] {
        for &p in &GRID5 {
            for &q in &GRID5 {
                for &r in &GRID5 {
                    let prm = DueckParams::new(case, p, q, r);
                    let nf = dueck_closed_nofeedback(&prm).unwrap().vertices2d().unwrap();
                    let i1 = dueck_closed_inner1(&prm).unwrap().vertices2d().unwrap();
                    let i2 = dueck_closed_inner2(&prm).unwrap().vertices2d().unwrap();
                    let out = dueck_closed_outer(&prm).unwrap();
                    assert!(is_subset(&nf, &i1.system, EPS), "nf {case:?} {p} {q} {r}");
                    assert!(is_subset(&i1, &i2.system, EPS), "i1 {case:?} {p} {q} {r}");
                    assert!(is_subset(&i2, &out, EPS), "i2 {case:?} {p} {q} {r}");
                }
            }
        }
    }
}

#[test]
fn dueck_equality_detection() {
    let regions = |case, p, q, r| {
        let prm = DueckParams::new(case, p, q, r);
        (
            dueck_closed_inner1(&prm).unwrap().vertices2d().unwrap(),
            dueck_closed_inner2(&prm).unwrap().vertices2d().unwrap(),
            dueck_closed_outer(&prm).unwrap().vertices2d().unwrap(),
        )
    };
    let (i1, i2, o) = regions(NoiseCase::Chain, 0.25, 0.2, 0.3);
    assert!(region_equal(&i2, &o, 1e-9));
    assert!(!region_equal(&i1, &i2, 1e-9));
    let (i1, i2, o) = regions(NoiseCase::Star, 0.25, 0.2, 0.3);
    assert!(region_equal(&i1, &i2, 1e-9) && region_equal(&i2, &o, 1e-9));
    for case in [NoiseCase::Chain, NoiseCase::Star] {
        let (i1, i2, o) = regions(case, 0.05, 0.05, 0.05);
        assert!(!region_equal(&i2, &o, 1e-9) && !region_equal(&i1, &i2, 1e-9));
    }
}

#[test]
fn v0_choice_mirrors_users() {
    // with q = r in case 2 the users are symmetric, so the two V0 choices swap the rows
    let mut a = DueckParams::new(NoiseCase::Star, 0.1, 0.2, 0.2);
    let ra = inner2_rows(&dueck_distribution(&a).unwrap()).unwrap();
    a.v0 = V0Choice::Z0Z2;
    let rb = inner2_rows(&dueck_distribution(&a).unwrap()).unwrap();
    for (x, y) in [("key1", "key2"), ("plain1", "plain2"), ("cap1", "cap2"), ("sum", "sum")] {
        assert!((ra.get(x).unwrap() - rb.get(y).unwrap()).abs() < 1e-9, "{x}/{y}");
    }
}
