use ontic_core::integrate::{mc_expectations, uniform_sphere_sampler};
use ontic_core::models::ks_sample;
use ontic_core::{BlochVector, McConfig, PureState};
use ontic_lab::parallel::{par_mc_expectation, par_mc_expectations};
use proptest::prelude::*;

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn parallel_matches_serial_bit_for_bit() {
    let psi = PureState::new(BlochVector::from_angles(0.7, 2.9));
    let sampler = |seed, i| ks_sample(&psi, seed, i);
    let f = |l: &ontic_core::OnticState, out: &mut [f64]| {
        let v = l.as_single().unwrap();
        out[0] = v.z();
        out[1] = v.x() * v.y();
        out[2] = f64::from(u8::from(v.z() > 0.3));
    };
    for (n, batch) in [(100_000, 4096), (12_345, 1000), (777, 1)] {
        let cfg = McConfig::new(n, 31, batch).unwrap();
        let serial = mc_expectations(&f, 3, &sampler, &cfg).unwrap();
        for threads in [1, 2, 7] {
            let par = in_pool(threads, || par_mc_expectations(&f, 3, &sampler, &cfg).unwrap());
            for (a, b) in serial.iter().zip(&par) {
                assert_eq!(a.mean.to_bits(), b.mean.to_bits());
                assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
                assert_eq!((a.n, a.seed), (b.n, b.seed));
            }
        }
    }
}

#[test]
fn parallel_rejects_non_finite_values() {
    let cfg = McConfig::new(1000, 1, 64).unwrap();
    let r = par_mc_expectation(
        |v: &BlochVector| if v.z() > 0.99 { f64::NAN } else { v.z() },
        uniform_sphere_sampler,
        &cfg,
    );
    assert!(r.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn any_schedule_gives_the_same_estimate(seed in any::<u64>(), n in 100u64..5000, batch in 1u64..600) {
        let cfg = McConfig::new(n, seed, batch).unwrap();
        let f = |v: &BlochVector| v.z() * v.z();
        let serial = ontic_core::integrate::mc_expectation(f, uniform_sphere_sampler, &cfg).unwrap();
        let par = in_pool(3, || par_mc_expectation(f, uniform_sphere_sampler, &cfg).unwrap());
        prop_assert_eq!(serial, par);
    }
}
