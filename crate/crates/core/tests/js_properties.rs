use cenlab::datasets::Rng;
use cenlab::metrics::{histogram2d, js_between_samples, js_divergence, Histogram2D, Support};
use cenlab::Matrix;
use proptest::prelude::*;

fn unit_support() -> Support {
    Support::new(0.0, 1.0, 0.0, 1.0).unwrap()
}

fn hist(mass: Vec<f64>, bins: usize) -> Histogram2D {
    Histogram2D {
        bins,
        support: unit_support(),
        mass,
        dropped: 0,
    }
}

fn normalised(raw: &[f64]) -> Vec<f64> {
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

/// Direct definition with natural logs, converted to bits at the end.
fn js_oracle(p: &[f64], q: &[f64]) -> f64 {
    let kl = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .filter(|(x, _)| **x > 0.0)
            .map(|(x, y)| x * (x / y).ln())
            .sum()
    };
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| (a + b) / 2.0).collect();
    (kl(p, &m) + kl(q, &m)) / 2.0 / std::f64::consts::LN_2
}

fn mass_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], len)
        .prop_filter("some mass", |v| v.iter().sum::<f64>() > 1e-6)
        .prop_map(|v| normalised(&v))
}

proptest! {
    #[test]
    fn symmetric_and_bounded(p in mass_vec(9), q in mass_vec(9)) {
        let (hp, hq) = (hist(p, 3), hist(q, 3));
        let a = js_divergence(&hp, &hq).unwrap();
        let b = js_divergence(&hq, &hp).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn zero_on_self(p in mass_vec(16)) {
        let h = hist(p, 4);
        prop_assert!(js_divergence(&h, &h).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn matches_direct_summation_on_four_bins(p in mass_vec(4), q in mass_vec(4)) {
        let got = js_divergence(&hist(p.clone(), 2), &hist(q.clone(), 2)).unwrap();
        prop_assert!((got - js_oracle(&p, &q)).abs() <= 1e-12);
    }

    #[test]
    fn positive_when_histograms_differ(p in mass_vec(4), q in mass_vec(4)) {
        let differs = p.iter().zip(&q).any(|(a, b)| (a - b).abs() > 1e-6);
        let js = js_divergence(&hist(p, 2), &hist(q, 2)).unwrap();
        prop_assert_eq!(js > 1e-12, differs);
    }
}

#[test]
fn two_bin_hand_case() {
    let p = vec![1.0, 0.0, 0.0, 0.0];
    let q = vec![0.5, 0.5, 0.0, 0.0];
    let by_hand = 0.5 * (4.0f64 / 3.0).log2() + 0.5 * (0.5 * (2.0f64 / 3.0).log2() + 0.5 * 2.0f64.log2());
    assert!((js_oracle(&p, &q) - by_hand).abs() < 1e-15);
    let got = js_divergence(&hist(p, 2), &hist(q, 2)).unwrap();
    assert!((got - 0.311278).abs() <= 1e-6, "{got}");
    assert!((got - by_hand).abs() <= 1e-12);
}

#[test]
fn disjoint_supports_score_one() {
    let p = vec![0.5, 0.5, 0.0, 0.0];
    let q = vec![0.0, 0.0, 0.25, 0.75];
    assert!((js_divergence(&hist(p, 2), &hist(q, 2)).unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn half_shifted_sample_brute_force() {
    // four points in four distinct bins of the fitted support
    let gt = Matrix::from_vec(4, 2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
    let generated = Matrix::from_vec(4, 2, vec![0.0, 0.0, 1.0, 0.0, 50.0, 50.0, -50.0, 50.0]).unwrap();
    let got = js_between_samples(&generated, &gt, 2).unwrap();
    let expected = js_oracle(&[0.5, 0.5, 0.0, 0.0], &[0.25, 0.25, 0.25, 0.25]);
    assert!(got > 0.0 && got < 1.0);
    assert!((got - expected).abs() <= 1e-12, "{got} vs {expected}");
}

#[test]
fn histograms_of_random_clouds_are_normalised() {
    let mut rng = Rng::new(4);
    let data = (0..2000).map(|_| rng.uniform(-0.2, 1.2)).collect();
    let h = histogram2d(&Matrix::from_vec(1000, 2, data).unwrap(), unit_support(), 7).unwrap();
    assert!((h.total_mass() - 1.0).abs() <= 1e-12);
    assert!(h.dropped > 0);
}
