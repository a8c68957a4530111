use proptest::prelude::*;
use vipaug_core::augment::{vipaug_traced, AugmentConfig, Variant};
use vipaug_core::pool::{phase_of, FractalPool, PoolEntry};
use vipaug_core::spectrum::DftMode;
use vipaug_core::{ImageTensor, RngStream, Shape};

fn image(shape: Shape, values: &[f64]) -> ImageTensor {
    ImageTensor::new(shape, values.iter().cycle().take(shape.len()).copied().collect()).unwrap()
}

fn arb_case() -> impl Strategy<Value = (Shape, Vec<f64>, Vec<f64>, u64)> {
    (2usize..7, 2usize..7, 1usize..4).prop_flat_map(|(h, w, c)| {
        let n = h * w * c;
        (
            Just(Shape::new(h, w, c).unwrap()),
            proptest::collection::vec(0.0f64..1.0, n),
            proptest::collection::vec(0.0f64..1.0, n),
            any::<u64>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn output_in_unit_range_and_reproducible((shape, a, b, seed) in arb_case(), mode in prop_oneof![Just(DftMode::ThreeD), Just(DftMode::TwoD)]) {
        let img = image(shape, &a);
        let partner = image(shape, &b);
        let fractal = phase_of(&partner, mode);
        for variant in [Variant::Standard, Variant::Reverse, Variant::Uniform] {
            let mut config = AugmentConfig::cifar10();
            config.dft_mode = mode;
            config.variant = variant;
            let run = || vipaug_traced(&img, &partner, Some(&fractal), &config, &mut RngStream::for_sample(seed, 3)).unwrap();
            let (out, trace) = run();
            prop_assert_eq!(out.shape(), shape);
            prop_assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
            let (again, trace_again) = run();
            prop_assert_eq!(out, again);
            prop_assert_eq!(trace, trace_again);
        }
    }
}

#[test]
fn pool_cache_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let shape = Shape::new(4, 5, 3).unwrap();
    let entries = (0..3)
        .map(|k| PoolEntry {
            path: format!("fractal_{k}.png"),
            phase: phase_of(&image(shape, &[0.1 * k as f64, 0.7, 0.3, 0.9]), DftMode::ThreeD),
        })
        .collect();
    let pool = FractalPool::from_entries(shape, entries).unwrap();
    let path = dir.path().join("pool.vipf");
    pool.save_cache(&path).unwrap();
    assert_eq!(FractalPool::load_cache(&path).unwrap(), pool);
}

#[test]
fn config_json_round_trip_and_unknown_keys() {
    let config = AugmentConfig::imagenet();
    let text = serde_json::to_string(&config).unwrap();
    assert_eq!(AugmentConfig::from_json(&text).unwrap(), config);
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["filter"] = 3.into();
    assert!(AugmentConfig::from_json(&value.to_string()).is_err());
}
