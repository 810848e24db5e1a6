use lewisgame::numerics::{
    average_ranks, cosine, l2_normalize, pearson, sample_categorical, sigmoid, softmax, spearman,
    Mat64, RngStream, Stream, Vec64,
};
use lewisgame::Error;
use proptest::prelude::*;

/// Rank by counting: 1 + (# strictly smaller) + (# ties excluding self) / 2.
fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let less = v.iter().filter(|&&y| y < x).count() as f64;
            let equal = v.iter().filter(|&&y| y == x).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

fn brute_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

#[test]
fn softmax_examples() {
    let p = softmax(&[0.0, 0.0, 0.0], 1.0).unwrap();
    for v in &p {
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    let p = softmax(&[1000.0, 0.0], 1.0).unwrap();
    assert!((p[0] - 1.0).abs() < 1e-15 && p[1] >= 0.0 && p[1] < 1e-300);

    let logits = [1.0, 2.0, 3.0];
    let z: f64 = logits.iter().map(|l: &f64| l.exp()).sum();
    let p = softmax(&logits, 1.0).unwrap();
    for (pi, l) in p.iter().zip(logits) {
        assert!((pi - l.exp() / z).abs() < 1e-15);
    }
    let expected = [0.09003057, 0.24472847, 0.66524096];
    for (pi, e) in p.iter().zip(expected) {
        assert!((pi - e).abs() < 5e-9);
    }
}

#[test]
fn softmax_rejects_bad_temperature() {
    assert!(matches!(softmax(&[1.0, 2.0], 0.0), Err(Error::Parameter(_))));
    assert!(matches!(softmax(&[1.0, 2.0], -1.0), Err(Error::Parameter(_))));
    assert!(softmax(&[1.0, f64::NAN], 1.0).is_err());
}

#[test]
fn sigmoid_examples() {
    assert_eq!(sigmoid(&[0.0]), vec![0.5]);
    let s = sigmoid(&[40.0, -40.0, 800.0, -800.0]);
    assert!((s[0] - 1.0).abs() < 1e-15 && s[1] > 0.0 && s[1] < 1e-17);
    assert!(s[2] <= 1.0 && s[3] >= 0.0 && s.iter().all(|v| v.is_finite()));
    let s = sigmoid(&[1.0, -1.0]);
    assert!((s[0] - 1.0 / (1.0 + (-1.0f64).exp())).abs() < 1e-15);
    assert!((s[0] - 0.73105858).abs() < 5e-9);
    assert!((s[1] - 0.26894142).abs() < 5e-9);
}

#[test]
fn categorical_degenerate_and_invalid() {
    let mut rng = RngStream::named(3, Stream::Sampling);
    for _ in 0..1000 {
        assert_eq!(sample_categorical(&[0.0, 1.0, 0.0], &mut rng).unwrap(), 1);
        assert_eq!(sample_categorical(&[1.0], &mut rng).unwrap(), 0);
    }
    assert!(matches!(sample_categorical(&[0.5, 0.6], &mut rng), Err(Error::Distribution(_))));
    assert!(matches!(sample_categorical(&[1.2, -0.2], &mut rng), Err(Error::Distribution(_))));
    assert!(sample_categorical(&[], &mut rng).is_err());
}

#[test]
fn fair_coin_passes_chi_square() {
    let mut rng = RngStream::named(11, Stream::Sampling);
    let n = 10_000;
    let zeros = (0..n).filter(|_| sample_categorical(&[0.5, 0.5], &mut rng).unwrap() == 0).count();
    let freq = zeros as f64 / n as f64;
    assert!((0.48..=0.52).contains(&freq), "{freq}");
    // one degree of freedom, 99.9% critical value
    let e = n as f64 / 2.0;
    let chi2 = ((zeros as f64 - e).powi(2) + ((n - zeros) as f64 - e).powi(2)) / e;
    assert!(chi2 < 10.83, "chi2 {chi2}");
}

#[test]
fn four_category_frequencies_converge() {
    let probs = [0.1, 0.2, 0.3, 0.4];
    let mut rng = RngStream::named(5, Stream::Sampling);
    let mut counts = [0usize; 4];
    let n = 100_000;
    for _ in 0..n {
        counts[sample_categorical(&probs, &mut rng).unwrap()] += 1;
    }
    for (c, p) in counts.iter().zip(probs) {
        assert!((*c as f64 / n as f64 - p).abs() <= 0.01);
    }
}

#[test]
fn cosine_examples() {
    assert_eq!(cosine(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
    assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    assert!((cosine(&[1.0, 1.0], &[1.0, 0.0]).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert!(matches!(cosine(&[0.0, 0.0], &[1.0, 0.0]), Err(Error::DegenerateVector(_))));
    assert!(matches!(cosine(&[1.0], &[1.0, 0.0]), Err(Error::Dimension { .. })));
}

#[test]
fn spearman_examples() {
    assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap() - 1.0).abs() < 1e-15);
    assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
    let (x, y) = ([1.0, 2.0, 2.0, 3.0], [1.0, 3.0, 2.0, 4.0]);
    let oracle = brute_pearson(&brute_ranks(&x), &brute_ranks(&y));
    assert!((spearman(&x, &y).unwrap() - oracle).abs() < 1e-14);
    assert!(matches!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::UndefinedCorrelation(_))));
    assert!(pearson(&[1.0], &[1.0]).is_err());
}

#[test]
fn l2_normalize_examples() {
    assert_eq!(l2_normalize(&[3.0, 4.0]).unwrap(), vec![0.6, 0.8]);
    assert_eq!(l2_normalize(&[2.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
    let u = l2_normalize(&[0.6, 0.8]).unwrap();
    assert!((u[0] - 0.6).abs() < 1e-15 && (u[1] - 0.8).abs() < 1e-15);
    assert!(matches!(l2_normalize(&[0.0, 0.0]), Err(Error::DegenerateVector(_))));
}

#[test]
fn constructors_reject_non_finite() {
    assert!(Vec64::new(vec![1.0, f64::INFINITY]).is_err());
    assert!(Mat64::from_vec(1, 2, vec![0.0, f64::NAN]).is_err());
    assert!(Mat64::from_vec(2, 2, vec![0.0; 3]).is_err());
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let draw = |seed, stream| {
        let mut r = RngStream::named(seed, stream);
        (0..64).map(|_| r.uniform()).collect::<Vec<_>>()
    };
    assert_eq!(draw(9, Stream::Init), draw(9, Stream::Init));
    assert_ne!(draw(9, Stream::Init), draw(9, Stream::Sampling));
    assert_ne!(draw(9, Stream::Init), draw(10, Stream::Init));
    let base = RngStream::named(9, Stream::Eval);
    let a: Vec<f64> = { let mut r = base.fork(0); (0..8).map(|_| r.uniform()).collect() };
    let b: Vec<f64> = { let mut r = base.fork(1); (0..8).map(|_| r.uniform()).collect() };
    assert_ne!(a, b);
}

proptest! {
    #[test]
    fn softmax_shift_invariant(logits in prop::collection::vec(-30.0f64..30.0, 1..12), c in -500.0f64..500.0, t in 0.1f64..5.0) {
        let shifted: Vec<f64> = logits.iter().map(|l| l + c).collect();
        let p = softmax(&logits, t).unwrap();
        let q = softmax(&shifted, t).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn spearman_monotone_invariant(pairs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..30)) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        prop_assume!(x.iter().any(|v| *v != x[0]) && y.iter().any(|v| *v != y[0]));
        let fx: Vec<f64> = x.iter().map(|v| v.powi(3) + 2.0 * v).collect();
        let gy: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let a = spearman(&x, &y).unwrap();
        prop_assert!((a - spearman(&fx, &gy).unwrap()).abs() < 1e-12);
        prop_assert!((a - brute_pearson(&brute_ranks(&x), &brute_ranks(&y))).abs() < 1e-9);
        prop_assert_eq!(average_ranks(&x), brute_ranks(&x));
    }

    #[test]
    fn cosine_scale_invariant(
        v in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 2..16),
        lambda in 1e-3f64..1e3,
        mu in 1e-3f64..1e3,
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
        prop_assume!(a.iter().any(|x| x.abs() > 1e-3) && b.iter().any(|x| x.abs() > 1e-3));
        let la: Vec<f64> = a.iter().map(|x| x * lambda).collect();
        let mb: Vec<f64> = b.iter().map(|x| x * mu).collect();
        let c = cosine(&a, &b).unwrap();
        prop_assert!((-1.0..=1.0).contains(&c));
        prop_assert!((c - cosine(&la, &mb).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn normalize_is_idempotent(v in prop::collection::vec(-5.0f64..5.0, 1..16)) {
        prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
        let u = l2_normalize(&v).unwrap();
        let n: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((n - 1.0).abs() < 1e-12);
        let w = l2_normalize(&u).unwrap();
        for (a, b) in u.iter().zip(&w) {
            prop_assert!((a - b).abs() < 1e-15);
        }
    }
}
