use ssekit::sde::TimeGrid as Grid;
use ssekit::*;

fn normal_sample(mu: f64, n: usize, seed: u64) -> EnsembleEstimate {
    let grid = vec![0.0];
    let mut acc = EnsembleAccumulator::new(grid.clone());
    let mut s = NoiseStream::new(seed, 0);
    for _ in 0..n {
        acc.add_samples(&grid, &[mu + s.standard_normal::<f64>()]).unwrap();
    }
    acc.finalize().unwrap()
}

#[test]
fn sample_mean_is_unbiased() {
    let hits = (0..20)
        .filter(|&r| {
            let est = normal_sample(5.0, 1000, 100 + r);
            (est.mean[0] - 5.0).abs() <= 4.0 * est.stderr[0]
        })
        .count();
    assert!(hits >= 19, "{hits} of 20");
}

#[test]
fn stderr_scales_as_inverse_square_root() {
    let (mut small, mut large) = (0.0, 0.0);
    for r in 0..20 {
        small += normal_sample(0.0, 500, 1000 + r).stderr[0];
        large += normal_sample(0.0, 1000, 2000 + r).stderr[0];
    }
    let factor = large / small;
    assert!((0.6..=0.82).contains(&factor), "factor {factor}");
}

#[test]
fn ensemble_is_independent_of_thread_count() {
    let model = HomodyneQubit::new(HomodyneParams::default()).unwrap();
    let grid = Grid::new(1.0, 0.01).unwrap();
    let fs = [Functional::Eta11, Functional::BlochZ];
    let run = |threads| {
        simulate_ensemble(
            &model,
            SchemeId::EulerRenorm,
            &model.ground_state(),
            grid,
            &fs,
            EnsembleConfig::new(700, 9).with_threads(threads),
        )
        .unwrap()
    };
    let (a, b, c) = (run(1), run(3), run(8));
    for f in fs.into_iter().chain([Functional::OutputB]) {
        let (ea, eb, ec) = (a.estimate(f).unwrap(), b.estimate(f).unwrap(), c.estimate(f).unwrap());
        let bits = |e: &EnsembleEstimate| e.mean.iter().chain(&e.stderr).map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&ea), bits(&eb));
        assert_eq!(bits(&ea), bits(&ec));
    }
}

#[test]
fn ensemble_counts_match_accepted_trajectories() {
    let osc = DampedOscillator::new(OscillatorParams::default()).unwrap();
    let grid = Grid::new(0.5, 0.05).unwrap();
    let out = simulate_ensemble(
        &osc,
        SchemeId::PlatenWeak2,
        &osc.initial_state(),
        grid,
        &[Functional::MeanN],
        EnsembleConfig::new(300, 2),
    )
    .unwrap();
    assert_eq!(out.accepted(), 300);
    assert!(out.check_abort_rate().is_ok());
    let est = out.estimate(Functional::MeanN).unwrap();
    assert_eq!(est.count, 300);
    assert!(est.stderr[1..].iter().all(|s| *s > 0.0));
    // the oscillator has no measurement output
    assert!(out.estimate(Functional::OutputB).is_err());
}
