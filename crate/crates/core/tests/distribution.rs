use gamma0_dims::arith::{enumerate_squarefull, factorize};
use gamma0_dims::distribution::{
    eta_interval, rankin_tail_bound, rho_reference, squarefull_reciprocal_tail, v_psi_exact,
    v_psi_grid, zeta_interval, FordConstants,
};
use gamma0_dims::formulas::{eval_component, Component, SpaceKind};

#[test]
fn zeta_and_eta_intervals() {
    let z2 = zeta_interval(2.0);
    assert!(z2.contains(std::f64::consts::PI.powi(2) / 6.0));
    assert!(zeta_interval(3.0).contains(1.2020569031595942));
    let eta = eta_interval();
    assert!((eta.mid() - 2.173254312519554).abs() < 1e-11);
    assert!(eta.width() < 1e-10);
}

#[test]
fn rho_reference_values() {
    let at = |d: f64| rho_reference(1e10, &FordConstants::with_d(d)).unwrap();
    assert!((at(0.0).value - 0.0858334027336370033).abs() < 1e-12);
    assert!((at(2.1769687).value - 1.38331912112561940).abs() < 1e-10);
    assert!(rho_reference(100.0, &FordConstants::with_d(1.0)).unwrap().shape_only);
    assert!(rho_reference(1e10, &FordConstants { c: 0.8, d: None }).is_err());
}

#[test]
fn v_psi_matches_brute_force() {
    let x = 1000u64;
    for space in SpaceKind::ALL {
        // psi(N) >= sqrt(N) in every space, so N <= x^2 covers all values <= x
        let mut vals: Vec<i128> = (1..=x * x)
            .map(|n| eval_component(space, Component::Psi, &factorize(n, None)))
            .filter(|&p| p <= x as i128)
            .collect();
        vals.sort_unstable();
        vals.dedup();
        assert_eq!(v_psi_exact(space, x).unwrap(), vals.len() as u64, "{space}");
    }
    let g = v_psi_grid(SpaceKind::New, &[10, 100, 1000]).unwrap();
    assert!(g.windows(2).all(|p| p[0] <= p[1]));
}

#[test]
fn rankin_bound_dominates_partial_tail() {
    let y = 1000u64;
    for space in SpaceKind::ALL {
        let partial: f64 = enumerate_squarefull(10_000_000)
            .into_iter()
            .filter(|&n| n > y)
            .map(|n| 1.0 / eval_component(space, Component::Psi, &factorize(n, None)) as f64)
            .sum();
        let bound = rankin_tail_bound(space, y).unwrap();
        assert!(partial <= bound, "{space}: {partial} > {bound}");
    }
}

#[test]
fn reciprocal_tail_brackets() {
    let t = squarefull_reciprocal_tail(SpaceKind::New, 100, 1_000_000).unwrap();
    let direct: f64 = enumerate_squarefull(1_000_000)
        .into_iter()
        .filter(|&n| n > 100)
        .map(|n| 1.0 / eval_component(SpaceKind::New, Component::Psi, &factorize(n, None)) as f64)
        .sum();
    assert!((t.partial - direct).abs() < 1e-9 * direct);
    assert!(t.error_bound > 0.0 && t.upper() >= t.partial);
}
