use serde::Serialize;

/// A closed interval known to contain a real constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

const TERMS: u32 = 1000;

/// `zeta(s)` for real `s > 1`: the first 999 terms summed directly, then
/// Euler-Maclaurin from 1000 on with two Bernoulli corrections. The next
/// correction bounds the remainder; rounding is covered by a relative
/// allowance far above the accumulated error of the compensated sum.
pub fn zeta_interval(s: f64) -> Interval {
    assert!(s > 1.0, "zeta_interval needs s > 1");
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in (1..TERMS).rev() {
        let t = (n as f64).powf(-s);
        let y = t - comp;
        let u = sum + y;
        comp = (u - sum) - y;
        sum = u;
    }
    let m = TERMS as f64;
    let fm = m.powf(-s);
    let tail = m.powf(1.0 - s) / (s - 1.0) + fm / 2.0 + s * fm / (12.0 * m)
        - s * (s + 1.0) * (s + 2.0) * fm / (720.0 * m.powi(3));
    let remainder = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * fm / (30240.0 * m.powi(5));
    let v = sum + tail;
    let err = 2.0 * remainder + 1e-14 * v;
    Interval {
        lo: v - err,
        hi: v + err,
    }
}

/// `eta = zeta(3/2) / zeta(3)`.
pub fn eta_interval() -> Interval {
    let a = zeta_interval(1.5);
    let b = zeta_interval(3.0);
    Interval {
        lo: a.lo / b.hi,
        hi: a.hi / b.lo,
    }
}
