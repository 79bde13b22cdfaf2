use cascade_lab::shell::{shell_evolve, shell_steady_slope, ShellConfig, ShellState};

fn steady_slope(n: usize, d: f64, nu: f64, t_end: f64) -> (f64, usize) {
    let start = ShellState::zeros(n, d, nu).unwrap();
    let dt = (0.9 * start.max_stable_dt()).min(1e-3);
    let run = shell_evolve(&start, &ShellConfig::new(t_end, dt).pinned(1.0)).unwrap();
    let top = run.final_state.dissipation_shell().saturating_sub(3);
    (shell_steady_slope(&run.final_state, 2, top).unwrap().slope(), top)
}

#[test]
fn flat_transfer_gives_a_flat_spectrum() {
    let (slope, top) = steady_slope(16, 0.0, 1e-6, 40.0);
    assert!(slope.abs() <= 0.05, "slope {slope} over 2..={top}");
}

#[test]
fn steep_transfer_gives_minus_two_thirds() {
    let (slope, top) = steady_slope(14, 2.0, 6e-3, 20.0);
    assert!((slope + 2.0 / 3.0).abs() <= 0.05, "slope {slope} over 2..={top}");
}
