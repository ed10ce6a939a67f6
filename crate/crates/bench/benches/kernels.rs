use std::hint::black_box;

use cogest::estimation::{EstimatorKind, MseExperiment};
use cogest::rates::{bpsk_mutual_information, gaussian_input_mutual_information, EstimatedChannel};
use cogest::{block_rate, InputKind, NoiseParams, RateSettings, Scenario, Serial};
use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn channel() -> EstimatedChannel {
    EstimatedChannel {
        r_hat: Complex64::new(0.8, 0.3),
        err_var: 0.1,
        posterior_busy: 0.3,
        noise: NoiseParams { sigma_n2: 1.0, sigma_s2: 1.0 },
    }
}

fn estimators(c: &mut Criterion) {
    let exp = MseExperiment::new(&Scenario::default(), 1).unwrap();
    let mut i = 0u64;
    for kind in [EstimatorKind::Lmmse, EstimatorKind::Mmse] {
        c.bench_function(&format!("trial/{}", kind.as_str()), |b| {
            b.iter(|| {
                i += 1;
                black_box(exp.trial(kind, i).squared_error())
            })
        });
    }
}

fn mutual_information(c: &mut Criterion) {
    let ch = channel();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    c.bench_function("bpsk_mi/200", |b| {
        b.iter(|| black_box(bpsk_mutual_information(&ch, 5.0, cogest::Hypothesis::Idle, 200, &mut rng)))
    });
    c.bench_function("gaussian_mi/50", |b| {
        b.iter(|| black_box(gaussian_input_mutual_information(&ch, 5.0, 50, &mut rng)))
    });
}

fn rates(c: &mut Criterion) {
    let s = Scenario::default();
    let settings = RateSettings { outer_trials: 100, inner_samples: 50, estimator: EstimatorKind::Lmmse };
    let mut group = c.benchmark_group("block_rate");
    group.sample_size(10);
    for input in [InputKind::Gaussian, InputKind::Bpsk] {
        group.bench_function(input.as_str(), |b| {
            b.iter(|| black_box(block_rate(&s, input, &settings, 1, &Serial).unwrap().rate))
        });
    }
    group.finish();
}

criterion_group!(benches, estimators, mutual_information, rates);
criterion_main!(benches);
