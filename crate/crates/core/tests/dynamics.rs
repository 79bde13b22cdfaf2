use cascade_lab::field::XiGrid;
use cascade_lab::fixed_point::rescaled_w;
use cascade_lab::inviscid::{InitialProfile, LaxOleinik};
use cascade_lab::leray::{evolve_regularized, evolve_regularized_with_history, trace_characteristic, Mollifier};
use cascade_lab::viscous::{evolve, lyapunov, SolverConfig};
use cascade_lab::ModelParams;

fn params(nu: f64) -> ModelParams {
    ModelParams::from_alpha(2.0, 1.0, nu).unwrap()
}

#[test]
fn exact_solution_is_a_semigroup() {
    for seed in [3, 11, 29] {
        let w0 = InitialProfile::random(seed, 6);
        let direct = LaxOleinik::new(&w0);
        for (t, s) in [(0.3, 0.4), (0.5, 0.25), (0.2, 1.0)] {
            let restarted = LaxOleinik::new(&direct.snapshot(t, 512).unwrap());
            let mut checked = 0;
            for k in 1..400 {
                let x = k as f64 / 400.0;
                let (l, r) = (direct.eval(x - 1e-4, t + s).unwrap(), direct.eval(x + 1e-4, t + s).unwrap());
                if (l - r).abs() > 1e-3 {
                    continue; // near a shock
                }
                let a = direct.eval(x, t + s).unwrap();
                let b = restarted.eval(x, s).unwrap();
                assert!((a - b).abs() <= 1e-10, "seed {seed}, t = {t}, s = {s}, x = {x}: {a} vs {b}");
                checked += 1;
            }
            assert!(checked > 300);
        }
    }
}

#[test]
fn weighted_energy_decreases_from_above() {
    let grid_n = 1024;
    let times: Vec<f64> = (1..=12).map(|k| k as f64 * 0.25).collect();
    let config = SolverConfig::new(grid_n, 3.0).with_snapshots(times);
    let one = InitialProfile::constant(1.0).unwrap();
    let p = params(1.0);
    let viscous = evolve(&one, &p, &config).unwrap();
    let regularized = evolve_regularized(&one, &p, &Mollifier::new(0.05).unwrap(), &config).unwrap();
    for traj in [viscous, regularized] {
        let values: Vec<f64> = traj.snapshots.iter().map(lyapunov).collect();
        for w in values.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{values:?}");
        }
        assert!(values.last().unwrap() < &values[0]);
    }
}

#[test]
fn wider_windows_move_the_boundary_characteristic_faster() {
    let p = params(1.0);
    let config = SolverConfig::new(1024, 1.0);
    let one = InitialProfile::constant(1.0).unwrap();
    let positions: Vec<f64> = [0.05, 0.1, 0.2]
        .iter()
        .map(|&d| {
            let (_, h) = evolve_regularized_with_history(&one, &p, &Mollifier::new(d).unwrap(), &config, 1).unwrap();
            trace_characteristic(&h, &p, 1.0).unwrap().position_at(1.0).unwrap()
        })
        .collect();
    assert!(positions[0] > positions[1] && positions[1] > positions[2], "{positions:?}");
    assert!(positions.iter().all(|&x| x > 0.0 && x < 1.0));
}

#[test]
fn viscous_evolution_settles_on_the_fixed_point() {
    let p = params(1.0);
    for w0 in [0.0, 1.0] {
        let traj = evolve(&InitialProfile::constant(w0).unwrap(), &p, &SolverConfig::new(2048, 6.0)).unwrap();
        let fin = traj.final_field().unwrap();
        let grid = XiGrid::new(2048).unwrap();
        let worst = grid
            .centers()
            .enumerate()
            .filter(|(_, x)| *x >= 0.3)
            .map(|(i, x)| (fin.values[i] - rescaled_w(&p, x).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 2e-3, "w0 = {w0}: {worst}");
    }
}
