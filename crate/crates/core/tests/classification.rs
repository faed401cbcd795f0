use mugev::classify::reference::{sample_reference_clusters, REFERENCE_CLASSES};
use mugev::classify::{cross_validate, cross_validate_points, lda_fit, lda_predict, CvConfig, LdaModel};
use mugev::{EventLabel, FeatureVector};
use nalgebra::{Matrix3, Vector3};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_affine(rng: &mut ChaCha8Rng) -> (Matrix3<f64>, Vector3<f64>) {
    loop {
        let a = Matrix3::from_fn(|_, _| rng.random_range(-3.0f64..3.0));
        if a.determinant().abs() > 0.1 {
            let b = Vector3::from_fn(|_, _| rng.random_range(-100.0..100.0));
            return (a, b);
        }
    }
}

fn apply(a: &Matrix3<f64>, b: &Vector3<f64>, x: [f64; 3]) -> [f64; 3] {
    let y = a * Vector3::from(x) + b;
    [y[0], y[1], y[2]]
}

#[test]
fn predictions_survive_invertible_affine_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let centers = [[0.0, 0.0, 0.0], [2.0, 1.0, 0.0], [0.0, 2.0, 1.5]];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (c, l) in centers.iter().zip(EventLabel::ALL) {
        for _ in 0..60 {
            xs.push(std::array::from_fn(|j| c[j] + rng.random_range(-1.5..1.5)));
            ys.push(l);
        }
    }
    let base = LdaModel::fit(&xs, &ys).unwrap();
    let probes: Vec<[f64; 3]> = (0..1000)
        .map(|_| std::array::from_fn(|_| rng.random_range(-3.0..5.0)))
        .collect();
    let expected: Vec<EventLabel> = probes.iter().map(|p| base.predict(*p).unwrap().label).collect();
    for _ in 0..20 {
        let (a, b) = random_affine(&mut rng);
        let txs: Vec<_> = xs.iter().map(|x| apply(&a, &b, *x)).collect();
        let m = LdaModel::fit(&txs, &ys).unwrap();
        for (p, e) in probes.iter().zip(&expected) {
            assert_eq!(m.predict(apply(&a, &b, *p)).unwrap().label, *e);
        }
    }
}

#[test]
fn reference_clusters_classify_perfectly() {
    // Half the interval width: at the full width the imagery and movement
    // boxes straddle the shared-covariance boundary.
    let fv = sample_reference_clusters(300, 0.5, 2024);
    let report = cross_validate(&fv, &CvConfig::new(7)).unwrap();
    assert_eq!(report.accuracy, 1.0);
    for c in &report.per_class {
        assert_eq!(c.sensitivity, Some(1.0));
        assert_eq!(c.specificity, Some(1.0));
    }
    assert_eq!(report.per_repeat.len(), 10);
    for (k, row) in report.confusion.iter().enumerate() {
        assert_eq!(row.iter().sum::<u64>(), 300 * 10);
        assert_eq!(row[k], 3000);
    }
}

#[test]
fn reference_imagery_mean_is_imagery() {
    let fv = sample_reference_clusters(100, 0.5, 5);
    let model = lda_fit(&fv).unwrap();
    let imagery = REFERENCE_CLASSES[0].mean_theta();
    assert_eq!(imagery, [196_975.08, 143_275.14, 0.09]);
    assert_eq!(lda_predict(&model, imagery).unwrap().label, EventLabel::Imagery);
    for c in &REFERENCE_CLASSES {
        assert_eq!(model.predict(c.mean_theta()).unwrap().label, c.label);
    }
}

#[test]
fn shuffled_labels_land_near_chance() {
    let mut fv: Vec<FeatureVector> = sample_reference_clusters(100, 1.0, 9);
    let mut labels: Vec<_> = fv.iter().map(|f| f.label).collect();
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(10));
    for (f, l) in fv.iter_mut().zip(labels) {
        f.label = l;
    }
    let r = cross_validate(&fv, &CvConfig::new(11)).unwrap();
    assert!((0.25..=0.42).contains(&r.accuracy), "{}", r.accuracy);
}

#[test]
fn cross_validation_is_seeded() {
    let fv = sample_reference_clusters(40, 2.0, 1);
    let cfg = CvConfig {
        folds: 10,
        repeats: 3,
        ..CvConfig::new(3)
    };
    assert_eq!(cross_validate(&fv, &cfg).unwrap(), cross_validate(&fv, &cfg).unwrap());
    let xs: Vec<[f64; 3]> = fv.iter().map(mugev::classify::theta_of).collect();
    let ys: Vec<EventLabel> = fv.iter().map(|f| f.label.unwrap()).collect();
    assert_eq!(
        cross_validate_points(&xs, &ys, &cfg).unwrap(),
        cross_validate(&fv, &cfg).unwrap()
    );
}

#[test]
fn unlabeled_features_are_rejected() {
    let mut fv = sample_reference_clusters(30, 1.0, 1);
    fv[4].label = None;
    assert!(matches!(
        cross_validate(&fv, &CvConfig::new(1)),
        Err(mugev::classify::ClassifyError::Unlabeled(_))
    ));
}
