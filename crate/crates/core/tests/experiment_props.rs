//! Ensembles, phase sweeps and threshold rows.

use riplab::experiment::{
    make_ensemble, phase_csv, phase_sweep, sample_ensemble, thresholds_csv, thresholds_emit, Ensemble, ExperimentConfig,
};
use riplab::ric::ThresholdStatus;
use riplab::rng;
use riplab::solvers::SolverOptions;

#[test]
fn column_energy_is_one_on_average() {
    for ensemble in [Ensemble::Gaussian, Ensemble::Rademacher, Ensemble::TernarySparse] {
        let n = 16;
        let a = sample_ensemble(ensemble, n, 10_000, &mut rng::seeded(77));
        let energies: Vec<f64> = (0..a.cols()).map(|j| a.column(j).iter().map(|x| x * x).sum()).collect();
        let mean = energies.iter().sum::<f64>() / energies.len() as f64;
        let var = energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (energies.len() - 1) as f64;
        let se = (var / energies.len() as f64).sqrt();
        assert!((mean - 1.0).abs() <= 3.0 * se.max(1e-12), "{ensemble:?}: mean {mean}, se {se}");
    }
}

#[test]
fn ensembles_are_seed_deterministic() {
    for ensemble in [Ensemble::Gaussian, Ensemble::Rademacher, Ensemble::TernarySparse] {
        let c = ExperimentConfig::new(ensemble, 6, 9, 2, 1, 1234).unwrap();
        let a = make_ensemble(&c).unwrap();
        let b = make_ensemble(&c).unwrap();
        assert!(a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

#[test]
fn phase_sweep_rises_with_n_and_is_reproducible() {
    let base = ExperimentConfig::new(Ensemble::Gaussian, 8, 64, 4, 20, 2024).unwrap();
    let ns: Vec<usize> = (8..=48).step_by(8).collect();
    let opts = SolverOptions::default();
    let cells = phase_sweep(&base, &ns, &[4], &opts).unwrap();
    assert_eq!(cells.len(), ns.len());
    for w in cells.windows(2) {
        assert!(w[1].success_rate >= w[0].success_rate - 0.15, "{:?}", cells);
    }
    assert!(cells.last().unwrap().success_rate >= 0.9);
    assert!(cells.iter().all(|c| c.success_rate == c.successes as f64 / c.trials as f64));
    let again = phase_sweep(&base, &ns, &[4], &opts).unwrap();
    assert_eq!(phase_csv(&cells), phase_csv(&again));
}

#[test]
fn square_systems_and_empty_signals_always_succeed() {
    let base = ExperimentConfig::new(Ensemble::Gaussian, 12, 12, 0, 5, 3).unwrap();
    let cells = phase_sweep(&base, &[12], &[0, 5], &SolverOptions::default()).unwrap();
    assert!(cells.iter().all(|c| c.success_rate == 1.0), "{cells:?}");
}

#[test]
fn threshold_curve_reference_rows() {
    let rows = thresholds_emit(1.0, 2.4, 0.005).unwrap();
    let at = |t: f64| rows.iter().find(|r| (r.t - t).abs() < 1e-9).unwrap();
    assert_eq!(at(1.0).status, ThresholdStatus::Sharp);
    assert!((at(1.0).delta_star - 1.0 / 3.0).abs() < 1e-15);
    assert!((at(2.0).delta_star - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((at(2.0).n_star.unwrap() - 83.7).abs() < 0.1);
    let best = rows.iter().filter(|r| r.t >= 1.4 - 1e-9).min_by(|a, b| a.n_star.unwrap().total_cmp(&b.n_star.unwrap())).unwrap();
    assert!((best.t - 1.85).abs() <= 0.01);
    let csv = thresholds_csv(&rows);
    assert_eq!(csv.lines().count(), rows.len() + 1);
}
