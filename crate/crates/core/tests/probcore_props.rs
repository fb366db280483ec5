use bcmsr::probcore::{binary_convolve, binary_entropy, Alphabet, JointPmf};
use proptest::prelude::*;

fn normalize(w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

prop_compose! {
    fn small_pmf()(sizes in prop::collection::vec(1usize..4, 3))
        (w in prop::collection::vec(0.0f64..1.0, sizes.iter().product::<usize>()), sizes in Just(sizes))
        -> JointPmf {
        let mut w = w;
        w[0] += 1e-3;
        let vars = ["A", "B", "C"].iter().zip(&sizes).map(|(n, &s)| Alphabet::new(*n, s)).collect();
        JointPmf::new(vars, normalize(w)).unwrap()
    }
}

prop_compose! {
    /// A -> B -> C built from a marginal and two channels.
    fn markov_triple()(
        pa in prop::collection::vec(0.01f64..1.0, 3),
        kab in prop::collection::vec(0.0f64..1.0, 9),
        kbc in prop::collection::vec(0.0f64..1.0, 6),
    ) -> JointPmf {
        let pa = normalize(pa);
        let row = |k: &[f64], i: usize, n: usize| normalize(k[i * n..(i + 1) * n].iter().map(|x| x + 1e-6).collect());
        let vars = vec![Alphabet::new("A", 3), Alphabet::new("B", 3), Alphabet::new("C", 2)];
        JointPmf::from_fn(vars, |i| pa[i[0]] * row(&kab, i[0], 3)[i[1]] * row(&kbc, i[1], 2)[i[2]]).unwrap()
    }
}

proptest! {
    #[test]
    fn chain_rule(p in small_pmf()) {
        let joint = p.entropy(&["A", "B"]).unwrap();
        let split = p.entropy(&["A"]).unwrap() + p.cond_entropy(&["B"], &["A"]).unwrap();
        prop_assert!((joint - split).abs() < 1e-10);
        let three = p.entropy(&["C", "A", "B"]).unwrap();
        let split3 = joint + p.cond_entropy(&["C"], &["A", "B"]).unwrap();
        prop_assert!((three - split3).abs() < 1e-10);
    }

    #[test]
    fn information_nonnegative(p in small_pmf()) {
        prop_assert!(p.cond_mutual_info(&["A"], &["B"], &["C"]).unwrap() >= -1e-10);
        prop_assert!(p.mutual_info(&["A", "C"], &["B"]).unwrap() >= -1e-10);
        prop_assert!(p.cond_entropy(&["A"], &["B", "C"]).unwrap() >= -1e-10);
    }

    #[test]
    fn data_processing(p in markov_triple()) {
        let ac = p.mutual_info(&["A"], &["C"]).unwrap();
        let ab = p.mutual_info(&["A"], &["B"]).unwrap();
        prop_assert!(ac <= ab + 1e-10);
        prop_assert!(p.cond_mutual_info(&["A"], &["C"], &["B"]).unwrap().abs() < 1e-10);
    }

    #[test]
    fn convolution_raises_entropy(a in 0.0f64..=0.5, b in 0.0f64..=0.5) {
        let c = binary_convolve(a, b).unwrap();
        let hc = binary_entropy(c).unwrap();
        prop_assert!(hc >= binary_entropy(a).unwrap().max(binary_entropy(b).unwrap()) - 1e-10);
        prop_assert!((c - binary_convolve(b, a).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn marginals_are_pmfs(p in small_pmf()) {
        for keep in [&["A"][..], &["C", "A"], &["B", "C"]] {
            let m = p.marginalize(keep).unwrap();
            prop_assert!((m.table().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
