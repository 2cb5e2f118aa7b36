use gamma0_dims::arith::{factorize, mobius};
use gamma0_dims::formulas::{
    dimension, discrepancy12, eval_component, local_values, Component, SpaceKind, Weight,
};
use proptest::prelude::*;

fn w(k: u64) -> Weight {
    Weight::new(k).unwrap()
}

fn dim(space: SpaceKind, k: u64, n: u64) -> i128 {
    dimension(space, w(k), &factorize(n, None)).unwrap().total
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[test]
fn genus_of_modular_curves() {
    for (n, g) in [(1, 0), (11, 1), (22, 2), (23, 2), (37, 2), (60, 7), (100, 7), (389, 32)] {
        assert_eq!(dim(SpaceKind::Full, 2, n), g, "N = {n}");
    }
}

#[test]
fn level_one_weights() {
    let want = [(2, 0), (4, 0), (10, 0), (12, 1), (14, 0), (24, 2), (36, 3)];
    for (k, d) in want {
        assert_eq!(dim(SpaceKind::Full, k, 1), d, "k = {k}");
    }
    assert_eq!(dim(SpaceKind::Full, 12, 2), 2);
}

#[test]
fn known_new_dimensions() {
    for (n, d) in [(11, 1), (22, 0), (23, 2), (30, 1), (37, 2), (389, 32)] {
        assert_eq!(dim(SpaceKind::New, 2, n), d, "N = {n}");
    }
}

#[test]
fn invalid_weights_rejected() {
    for k in [0, 1, 3, 13] {
        assert!(Weight::new(k).is_err());
    }
}

#[test]
fn local_values_of_prime_levels() {
    for p in [5u64, 7, 13, 101] {
        let v = local_values(SpaceKind::Full, p, 1).unwrap();
        assert_eq!(v.psi, (p + 1) as i128);
        assert_eq!(v.nu_inf, 2);
    }
}

proptest! {
    #[test]
    fn terms_sum_to_total(n in 1u64..1_000_000_000_000, k in 1u64..40) {
        let k = w(2 * k);
        for space in SpaceKind::ALL {
            let d = dimension(space, k, &factorize(n, None)).unwrap();
            let s: i128 = d.terms().iter().map(|t| t.num12).sum();
            prop_assert_eq!(s, 12 * d.total);
            prop_assert!(d.total >= 0);
            prop_assert_eq!(
                discrepancy12(space, k, &factorize(n, None)).unwrap(),
                12 * d.total - (k.get() as i128 - 1) * d.psi
            );
        }
    }

    #[test]
    fn spaces_are_nested(n in 1u64..10_000_000_000, k in 1u64..13) {
        let f = factorize(n, None);
        let [a, b, c] = SpaceKind::ALL.map(|s| dimension(s, w(2 * k), &f).unwrap().total);
        prop_assert!(a >= b && b >= c);
        if mobius(&f) != 0 {
            prop_assert_eq!(b, c);
        }
    }

    #[test]
    fn components_are_multiplicative(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        prop_assume!(gcd(a, b) == 1);
        let (fa, fb, fab) = (factorize(a, None), factorize(b, None), factorize(a * b, None));
        for space in SpaceKind::ALL {
            for c in Component::ALL {
                prop_assert_eq!(
                    eval_component(space, c, &fab),
                    eval_component(space, c, &fa) * eval_component(space, c, &fb)
                );
            }
        }
    }

    #[test]
    fn dimension_grows_with_weight(n in 1u64..1_000_000, k in 2u64..20) {
        let f = factorize(n, None);
        let lo = dimension(SpaceKind::Full, w(k * 2), &f).unwrap().total;
        let hi = dimension(SpaceKind::Full, w(k * 2 + 2), &f).unwrap().total;
        prop_assert!(hi >= lo);
    }
}
