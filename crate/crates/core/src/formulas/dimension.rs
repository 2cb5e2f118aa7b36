use serde::Serialize;

use super::coeffs::{coeff_c2, coeff_c3, delta2, SpaceKind, TwelfthInt, Weight};
use super::local::{local_values, Component, LocalValues};
use crate::arith::{eval_multiplicative, mobius, Factorization};
use crate::{Error, Result};

pub fn eval_component(space: SpaceKind, component: Component, f: &Factorization) -> i128 {
    eval_all(space, f).get(component)
}

pub(crate) fn eval_all(space: SpaceKind, f: &Factorization) -> LocalValues {
    eval_multiplicative(f, |p, e| local_values(space, p, e))
        .expect("factorizations never carry zero exponents")
}

/// The five summands of a dimension formula and their total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionBreakdown {
    pub space: SpaceKind,
    pub k: Weight,
    pub n: u64,
    pub psi: i128,
    pub nu_inf: i128,
    pub nu2: i128,
    pub nu3: i128,
    /// mu(N) for the new and minimal spaces, 1 for the full space.
    pub mu_term: i8,
    pub total: i128,
}

impl DimensionBreakdown {
    pub fn psi_term(&self) -> TwelfthInt {
        TwelfthInt::from_twelfths((self.k.get() as i128 - 1) * self.psi)
    }

    pub fn nu_inf_term(&self) -> TwelfthInt {
        TwelfthInt::from_twelfths(-6 * self.nu_inf)
    }

    pub fn nu2_term(&self) -> TwelfthInt {
        coeff_c2(self.k) * self.nu2
    }

    pub fn nu3_term(&self) -> TwelfthInt {
        coeff_c3(self.k) * self.nu3
    }

    pub fn delta_term(&self) -> TwelfthInt {
        TwelfthInt::from_int(delta2(self.k) * self.mu_term as i128)
    }

    /// All five terms in formula order.
    pub fn terms(&self) -> [TwelfthInt; 5] {
        [
            self.psi_term(),
            self.nu_inf_term(),
            self.nu2_term(),
            self.nu3_term(),
            self.delta_term(),
        ]
    }
}

fn mu_slot(space: SpaceKind, f: &Factorization) -> i8 {
    match space {
        SpaceKind::Full => 1,
        SpaceKind::New | SpaceKind::Min => mobius(f),
    }
}

/// Twelve times the dimension, with integrality and sign checked.
pub(crate) fn total12(
    space: SpaceKind,
    k: Weight,
    n: u64,
    v: &LocalValues,
    mu_term: i8,
) -> Result<i128> {
    let km1 = k.get() as i128 - 1;
    let psi12 = km1
        .checked_mul(v.psi)
        .ok_or_else(|| Error::Overflow(format!("(k-1)*psi for k={k}, N={n}")))?;
    let rest = -6 * v.nu_inf
        + coeff_c2(k).num12 * v.nu2
        + coeff_c3(k).num12 * v.nu3
        + 12 * delta2(k) * mu_term as i128;
    let t = psi12
        .checked_add(rest)
        .ok_or_else(|| Error::Overflow(format!("dimension sum for k={k}, N={n}")))?;
    if t % 12 != 0 || t < 0 {
        return Err(Error::Transcription {
            n,
            detail: format!("{space} space, k={k}: 12*dim = {t}"),
        });
    }
    Ok(t)
}

pub fn dimension(space: SpaceKind, k: Weight, f: &Factorization) -> Result<DimensionBreakdown> {
    let v = eval_all(space, f);
    let mu_term = mu_slot(space, f);
    let t = total12(space, k, f.n(), &v, mu_term)?;
    Ok(DimensionBreakdown {
        space,
        k,
        n: f.n(),
        psi: v.psi,
        nu_inf: v.nu_inf,
        nu2: v.nu2,
        nu3: v.nu3,
        mu_term,
        total: t / 12,
    })
}

/// `12 d - (k-1) psi`, i.e. the non-principal part of the formula in twelfths.
pub fn discrepancy12(space: SpaceKind, k: Weight, f: &Factorization) -> Result<i128> {
    let d = dimension(space, k, f)?;
    Ok(12 * d.total - (k.get() as i128 - 1) * d.psi)
}
