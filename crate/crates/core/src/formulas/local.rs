//! Local factor tables on prime powers `p^e > 1`.
//!
//! Every table is a literal case split; the tests and the integration oracles
//! (integrality, divisor decomposition, squarefree coincidence) are what keep
//! these honest.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use super::coeffs::SpaceKind;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Psi,
    NuInf,
    Nu2,
    Nu3,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::Psi, Component::NuInf, Component::Nu2, Component::Nu3];
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Psi => "psi",
            Component::NuInf => "nu_inf",
            Component::Nu2 => "nu2",
            Component::Nu3 => "nu3",
        })
    }
}

/// The four multiplicative components evaluated together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalValues {
    pub psi: i128,
    pub nu_inf: i128,
    pub nu2: i128,
    pub nu3: i128,
}

impl LocalValues {
    pub const ONE: LocalValues = LocalValues {
        psi: 1,
        nu_inf: 1,
        nu2: 1,
        nu3: 1,
    };

    pub fn get(&self, c: Component) -> i128 {
        match c {
            Component::Psi => self.psi,
            Component::NuInf => self.nu_inf,
            Component::Nu2 => self.nu2,
            Component::Nu3 => self.nu3,
        }
    }
}

impl Mul for LocalValues {
    type Output = LocalValues;
    fn mul(self, o: Self) -> Self {
        LocalValues {
            psi: self.psi * o.psi,
            nu_inf: self.nu_inf * o.nu_inf,
            nu2: self.nu2 * o.nu2,
            nu3: self.nu3 * o.nu3,
        }
    }
}

impl std::iter::Product for LocalValues {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(LocalValues::ONE, Mul::mul)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// mu(p^j) for a prime p.
fn mu_prime_power(j: u32) -> i128 {
    match j {
        0 => 1,
        1 => -1,
        _ => 0,
    }
}

pub fn local_factor(space: SpaceKind, component: Component, p: u64, e: u32) -> Result<i128> {
    local_values(space, p, e).map(|v| v.get(component))
}

pub fn local_values(space: SpaceKind, p: u64, e: u32) -> Result<LocalValues> {
    if e == 0 {
        return Err(Error::ZeroExponent);
    }
    Ok(match space {
        SpaceKind::Full => full(p, e),
        SpaceKind::New => new(p, e),
        SpaceKind::Min => min(p, e),
    })
}

fn full(p: u64, e: u32) -> LocalValues {
    let q = p as i128;
    let psi = q.pow(e) + q.pow(e - 1);
    let nu_inf = if e % 2 == 1 {
        2 * q.pow((e - 1) / 2)
    } else {
        q.pow(e / 2) + q.pow(e / 2 - 1)
    };
    let nu2 = if p == 2 && e == 1 {
        1
    } else if p % 4 == 1 {
        2
    } else {
        0
    };
    let nu3 = if p == 3 && e == 1 {
        1
    } else if p % 3 == 1 {
        2
    } else {
        0
    };
    LocalValues { psi, nu_inf, nu2, nu3 }
}

fn new(p: u64, e: u32) -> LocalValues {
    let q = p as i128;
    let psi = match e {
        1 => q - 1,
        2 => q * q - q - 1,
        _ => q.pow(e - 3) * (q - 1) * (q - 1) * (q + 1),
    };
    let nu_inf = match e {
        2 => q - 2,
        _ if e % 2 == 0 => q.pow(e / 2 - 2) * (q - 1) * (q - 1),
        _ => 0,
    };
    let nu2 = if p % 4 == 3 && e == 1 {
        -2
    } else if (p % 4 == 3 && e == 2) || (p == 2 && e == 3) {
        1
    } else if (p % 4 == 1 && e == 2) || (p == 2 && e <= 2) {
        -1
    } else {
        0
    };
    let nu3 = if p % 3 == 2 && e == 1 {
        -2
    } else if (p % 3 == 2 && e == 2) || (p == 3 && e == 3) {
        1
    } else if (p % 3 == 1 && e == 2) || (p == 3 && e <= 2) {
        -1
    } else {
        0
    };
    LocalValues { psi, nu_inf, nu2, nu3 }
}

fn min(p: u64, e: u32) -> LocalValues {
    let q = p as i128;
    let g = gcd(gcd(2, q - 1), e as i128);
    assert_eq!((q - 1) % g, 0, "psi^min prefactor must divide exactly");
    let prefactor = (q - 1) / g;
    let psi = prefactor
        * match e {
            1 => 1,
            2 => q - 1,
            _ => q.pow(e - 3) * (q * q - 1),
        };
    let nu_inf = if p == 2 && e % 2 == 0 && e > 2 {
        2i128.pow(e / 2 - 2)
    } else {
        0
    };
    let nu2 = if p % 4 == 3 {
        -2 * mu_prime_power(e - 1)
    } else if p == 2 && e <= 2 {
        -1
    } else if p == 2 && e == 3 {
        1
    } else {
        0
    };
    let nu3 = if p % 3 == 2 && !(p == 2 && e == 2) {
        -2 * mu_prime_power(e - 1)
    } else if p == 3 && e <= 2 {
        -1
    } else if (p == 2 && e == 2) || (p == 3 && e == 3) {
        1
    } else {
        0
    };
    LocalValues { psi, nu_inf, nu2, nu3 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SpaceKind::*;

    fn lf(s: SpaceKind, c: Component, p: u64, e: u32) -> i128 {
        local_factor(s, c, p, e).unwrap()
    }

    #[test]
    fn table_examples() {
        assert_eq!(lf(Full, Component::NuInf, 3, 3), 6);
        assert_eq!(lf(New, Component::Psi, 2, 2), 1);
        assert_eq!(lf(Min, Component::Psi, 3, 2), 2);
        assert_eq!(lf(Min, Component::Nu2, 2, 3), 1);
        assert_eq!(lf(Min, Component::Nu3, 2, 2), 1);
        assert_eq!(lf(New, Component::Psi, 11, 1), 10);
    }

    #[test]
    fn zero_exponent_rejected() {
        assert!(matches!(local_factor(New, Component::Psi, 5, 0), Err(Error::ZeroExponent)));
    }

    #[test]
    fn min_special_values() {
        // p^e in {2,4}: nu2 = -1; 8: +1; higher powers of 2 vanish
        assert_eq!((1..=5).map(|e| lf(Min, Component::Nu2, 2, e)).collect::<Vec<_>>(), vec![-1, -1, 1, 0, 0]);
        // nu3 at 2^e: -2, then the p^e = 4 override, then -2 mu(2^{e-1}) = 0
        assert_eq!((1..=4).map(|e| lf(Min, Component::Nu3, 2, e)).collect::<Vec<_>>(), vec![-2, 1, 0, 0]);
        assert_eq!((1..=4).map(|e| lf(Min, Component::Nu3, 3, e)).collect::<Vec<_>>(), vec![-1, -1, 1, 0]);
        // p = 7 = 3 mod 4: -2 mu(7^{e-1})
        assert_eq!((1..=3).map(|e| lf(Min, Component::Nu2, 7, e)).collect::<Vec<_>>(), vec![-2, 2, 0]);
        assert_eq!((1..=6).map(|e| lf(Min, Component::NuInf, 2, e)).collect::<Vec<_>>(), vec![0, 0, 0, 1, 0, 2]);
        assert_eq!(lf(Min, Component::NuInf, 3, 4), 0);
    }

    #[test]
    fn min_psi_prefactor() {
        // odd p, even e halves the prefactor
        assert_eq!(lf(Min, Component::Psi, 5, 2), 2 * 4);
        assert_eq!(lf(Min, Component::Psi, 5, 3), 4 * 24);
        assert_eq!(lf(Min, Component::Psi, 5, 4), 2 * 5 * 24);
        assert_eq!(lf(Min, Component::Psi, 2, 5), 2 * 2 * 3);
    }

    #[test]
    fn squarefree_levels_share_local_factors() {
        for p in [2u64, 3, 5, 7, 11, 13, 97, 101, 65537] {
            assert_eq!(local_values(New, p, 1).unwrap(), local_values(Min, p, 1).unwrap(), "p={p}");
        }
    }

    // Local form of the cusp-count bound: nu_inf(p^e)^2 p^e <= psi(p^e)^2.
    #[test]
    fn local_cusp_ratio_at_most_one() {
        for s in SpaceKind::ALL {
            for p in [2u64, 3, 5, 7, 11, 13, 101, 997] {
                for e in (1..=12).take_while(|&e| (p as f64).powi(3 * e) < 1e37) {
                    let v = local_values(s, p, e as u32).unwrap();
                    let pe = (p as i128).pow(e as u32);
                    assert!(v.nu_inf >= 0);
                    assert!(v.nu_inf * v.nu_inf * pe <= v.psi * v.psi, "{s} {p}^{e}");
                }
            }
        }
    }

    #[test]
    fn local_factor_ratios_against_totient_lower_bound() {
        // psi^min(p^e) / f(p^e) >= 1 with f(p^e) = phi(p^e)^2 / (2 p^e)
        for p in [2u64, 3, 5, 7, 11, 13, 101, 997] {
            for e in (1..=10u32).take_while(|&e| (p as f64).powi(3 * e as i32) < 1e37) {
                let q = p as i128;
                let phi = q.pow(e - 1) * (q - 1);
                let psi = lf(Min, Component::Psi, p, e);
                assert!(2 * q.pow(e) * psi >= phi * phi, "{p}^{e}");
            }
        }
    }
}
