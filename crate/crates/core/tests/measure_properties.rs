use proptest::prelude::*;
use voi_core::measure::{
    entropy, expected_cost, marginals, mutual_information, normalize, partial_normalize_rows,
    CostMatrix, JointMeasure, LogBase, ProbVector,
};

fn weights(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..10.0f64, n).prop_filter("non-zero", |v| v.iter().sum::<f64>() > 1e-6)
}

fn joint(n: usize) -> impl Strategy<Value = JointMeasure> {
    prop::collection::vec(0.0..1.0f64, n * n)
        .prop_filter("non-zero", |v| v.iter().sum::<f64>() > 1e-6)
        .prop_map(move |v| {
            let p = normalize(&v).unwrap().into_inner();
            JointMeasure::new(n, n, p).unwrap()
        })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn normalize_examples() {
    assert_eq!(normalize(&[1.0; 4]).unwrap().as_slice(), &[0.25; 4]);
    assert_eq!(
        normalize(&[2.0, 0.0, 0.0, 0.0]).unwrap().as_slice(),
        &[1.0, 0.0, 0.0, 0.0]
    );
    let once = normalize(&[3.0, 1.0]).unwrap();
    assert_eq!(once.as_slice(), &[0.75, 0.25]);
    assert_eq!(normalize(once.as_slice()).unwrap(), once);
    assert!(normalize(&[0.0, 0.0]).is_err());
}

#[test]
fn partial_normalize_examples() {
    let id = [1.0, 0.0, 0.0, 1.0];
    assert_eq!(partial_normalize_rows(2, &id).unwrap(), id.to_vec());
    let m = [2.0, 2.0, 1.0, 3.0];
    assert_eq!(
        partial_normalize_rows(2, &m).unwrap(),
        vec![0.5, 0.5, 0.25, 0.75]
    );
    let scaled = [10.0, 10.0, 7.0, 21.0];
    assert_eq!(
        partial_normalize_rows(2, &scaled).unwrap(),
        vec![0.5, 0.5, 0.25, 0.75]
    );
    let err = partial_normalize_rows(2, &[1.0, 1.0, 0.0, 0.0]).unwrap_err();
    assert!(err.to_string().contains('1'), "{err}");
}

#[test]
fn marginal_examples() {
    let n = 5;
    let uniform = JointMeasure::product(&ProbVector::uniform(n), &ProbVector::uniform(n));
    let (px, pu) = marginals(&uniform);
    assert!(close(px.as_slice(), &[0.2; 5], 1e-15) && close(pu.as_slice(), &[0.2; 5], 1e-15));
    let p = ProbVector::new(vec![0.5, 0.25, 0.25]).unwrap();
    let (px, pu) = marginals(&JointMeasure::diagonal(&p));
    assert_eq!(px, p);
    assert_eq!(pu, p);
}

#[test]
fn information_and_entropy_examples() {
    let diag = JointMeasure::diagonal(&ProbVector::uniform(8));
    assert!((mutual_information(&diag, LogBase::Bits) - 3.0).abs() < 1e-12);
    let prod = JointMeasure::product(&ProbVector::uniform(8), &ProbVector::uniform(8));
    assert!(mutual_information(&prod, LogBase::Nats).abs() < 1e-15);
    assert_eq!(entropy(&ProbVector::point_mass(4, 2), LogBase::Bits), 0.0);
    assert!((entropy(&ProbVector::uniform(8), LogBase::Bits) - 3.0).abs() < 1e-12);
    let dyadic = ProbVector::new(vec![0.5, 0.25, 0.25]).unwrap();
    assert!((entropy(&dyadic, LogBase::Bits) - 1.5).abs() < 1e-12);
    assert!((entropy(&ProbVector::uniform(8), LogBase::Nats) - 8f64.ln()).abs() < 1e-12);
}

#[test]
fn expected_cost_examples() {
    let row: Vec<f64> = (0..8).map(|i: usize| i.min(8 - i) as f64).collect();
    let c = CostMatrix::circulant(&row).unwrap();
    let u = ProbVector::uniform(8);
    assert!((expected_cost(&JointMeasure::product(&u, &u), &c).unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(expected_cost(&JointMeasure::diagonal(&u), &c).unwrap(), 0.0);
    for n in [2, 4, 8, 32, 256] {
        let step = 2.0 * std::f64::consts::PI / n as f64;
        let row: Vec<f64> = (0..n).map(|i: usize| i.min(n - i) as f64 * step).collect();
        let c = CostMatrix::circulant(&row).unwrap();
        let u = ProbVector::uniform(n);
        let e = expected_cost(&JointMeasure::product(&u, &u), &c).unwrap();
        assert!((e - std::f64::consts::FRAC_PI_2).abs() < 1e-12, "n={n}");
    }
    let small = CostMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
    assert!(expected_cost(&JointMeasure::product(&u, &u), &small).is_err());
}

proptest! {
    #[test]
    fn normalize_is_idempotent(v in weights(1..12)) {
        let once = normalize(&v).unwrap();
        let twice = normalize(once.as_slice()).unwrap();
        prop_assert!((once.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(close(once.as_slice(), twice.as_slice(), 1e-15));
    }

    #[test]
    fn normalize_is_scale_invariant(v in weights(1..12), k in 1e-3..1e3f64) {
        let scaled: Vec<f64> = v.iter().map(|x| x * k).collect();
        prop_assert!(close(normalize(&v).unwrap().as_slice(), normalize(&scaled).unwrap().as_slice(), 1e-14));
    }

    #[test]
    fn row_normalization_ignores_row_scaling(
        m in prop::collection::vec(0.01..5.0f64, 16),
        k in prop::collection::vec(0.1..10.0f64, 4),
    ) {
        let scaled: Vec<f64> = m.iter().enumerate().map(|(i, v)| v * k[i / 4]).collect();
        let a = partial_normalize_rows(4, &m).unwrap();
        let b = partial_normalize_rows(4, &scaled).unwrap();
        prop_assert!(close(&a, &b, 1e-14));
        for r in a.chunks(4) {
            prop_assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn information_bounds(j in joint(5)) {
        let (px, pu) = marginals(&j);
        let mi = mutual_information(&j, LogBase::Nats);
        prop_assert!(mi >= 0.0);
        let bound = entropy(&px, LogBase::Nats).min(entropy(&pu, LogBase::Nats));
        prop_assert!(mi <= bound + 1e-12, "{mi} > {bound}");
    }

    #[test]
    fn product_measures_carry_no_information(a in weights(4..5), b in weights(4..5)) {
        let j = JointMeasure::product(&normalize(&a).unwrap(), &normalize(&b).unwrap());
        prop_assert!(mutual_information(&j, LogBase::Nats).abs() < 1e-12);
    }

    #[test]
    fn relabelling_preserves_cost_under_translation_invariance(
        j in joint(6),
        row in prop::collection::vec(0.0..3.0f64, 6),
        shift in 0usize..6,
    ) {
        let c = CostMatrix::circulant(&row).unwrap();
        let n = 6;
        let shifted: Vec<f64> = (0..n * n)
            .map(|k| {
                let (x, u) = (k / n, k % n);
                j.get((x + n - shift) % n, (u + n - shift) % n)
            })
            .collect();
        let shifted = JointMeasure::new(n, n, shifted).unwrap();
        let a = expected_cost(&j, &c).unwrap();
        let b = expected_cost(&shifted, &c).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}
