use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{product_index, HalfInt, SpinQuantum};
use crate::{Error, Result, StateVector, C64};

/// A coupled level `|L, M>` of two spins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoupledLevel {
    #[serde(rename = "L")]
    pub l: HalfInt,
    #[serde(rename = "M")]
    pub m: HalfInt,
}

impl CoupledLevel {
    pub fn new(l: HalfInt, m: HalfInt) -> Result<Self> {
        if l.twice() < 0 || m.twice().abs() > l.twice() || !(l - m).is_integer() {
            return Err(Error::InvalidQuantumNumbers(format!("|L={l}, M={m}>")));
        }
        Ok(Self { l, m })
    }

    pub fn from_f64(l: f64, m: f64) -> Result<Self> {
        Self::new(HalfInt::from_f64(l)?, HalfInt::from_f64(m)?)
    }

    /// Checks the triangle rule and parity against the coupled spins.
    pub fn check_against(&self, j1: SpinQuantum, j2: SpinQuantum) -> Result<()> {
        let (a, b, l) = (j1.twice() as i32, j2.twice() as i32, self.l.twice());
        if l < (a - b).abs() || l > a + b || (a + b - l) % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "L = {} cannot couple j1 = {j1} and j2 = {j2}",
                self.l
            )));
        }
        Ok(())
    }

    /// Every level of `j1 (x) j2`, `L` descending then `M` descending.
    pub fn all(j1: SpinQuantum, j2: SpinQuantum) -> Vec<CoupledLevel> {
        let (a, b) = (j1.twice() as i32, j2.twice() as i32);
        let mut out = Vec::new();
        let mut l = a + b;
        while l >= (a - b).abs() {
            let mut m = l;
            while m >= -l {
                out.push(CoupledLevel {
                    l: HalfInt::from_twice(l),
                    m: HalfInt::from_twice(m),
                });
                m -= 2;
            }
            l -= 2;
        }
        out
    }
}

fn ln_factorial(n: i32) -> f64 {
    const CACHED: usize = 1024;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(CACHED);
        t.push(0.0);
        for i in 1..CACHED {
            t.push(t[i - 1] + (i as f64).ln());
        }
        t
    });
    debug_assert!(n >= 0);
    let n = n as usize;
    if n < CACHED {
        table[n]
    } else {
        table[CACHED - 1] + (CACHED..=n).map(|i| (i as f64).ln()).sum::<f64>()
    }
}

/// `<j1 m1; j2 m2 | L M>` in the Condon-Shortley convention.
///
/// Evaluated from the Racah sum with every factorial accumulated in log
/// space. Returns zero when `M != m1 + m2`.
pub fn clebsch_gordan(
    j1: SpinQuantum,
    m1: HalfInt,
    j2: SpinQuantum,
    m2: HalfInt,
    level: CoupledLevel,
) -> Result<f64> {
    if !j1.contains(m1) || !j2.contains(m2) {
        return Err(Error::InvalidQuantumNumbers(format!(
            "projections m1 = {m1}, m2 = {m2} for j1 = {j1}, j2 = {j2}"
        )));
    }
    let level = CoupledLevel::new(level.l, level.m)?;
    level.check_against(j1, j2)?;
    if level.m != m1 + m2 {
        return Ok(0.0);
    }

    // Twice-valued quantum numbers; every combination below is even.
    let (a, b, l) = (j1.twice() as i32, j2.twice() as i32, level.l.twice());
    let (ma, mb, m) = (m1.twice(), m2.twice(), level.m.twice());
    let f = |twice: i32| ln_factorial(twice / 2);

    let ln_prefactor = 0.5
        * ((f64::from(l) + 1.0).ln() + f(l + a - b) + f(l - a + b) + f(a + b - l)
            - f(a + b + l + 2)
            + f(l + m)
            + f(l - m)
            + f(a - ma)
            + f(a + ma)
            + f(b - mb)
            + f(b + mb));

    // k runs over integers keeping every factorial argument non-negative.
    let k_min = 0.max((b - l - ma) / 2).max((a - l + mb) / 2);
    let k_max = ((a + b - l) / 2).min((a - ma) / 2).min((b + mb) / 2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let tk = 2 * k;
        let ln_den = f(tk)
            + f(a + b - l - tk)
            + f(a - ma - tk)
            + f(b + mb - tk)
            + f(l - b + ma + tk)
            + f(l - a - mb + tk);
        let term = (ln_prefactor - ln_den).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    Ok(sum)
}

/// `|L, M> = sum C^{LM}_{j1 m1 j2 m2} |m1, m2>` in the product basis.
pub fn coupled_basis_state(j1: SpinQuantum, j2: SpinQuantum, level: CoupledLevel) -> Result<StateVector> {
    let level = CoupledLevel::new(level.l, level.m)?;
    level.check_against(j1, j2)?;
    let mut psi = StateVector::zeros(j1.dim() * j2.dim());
    for m1 in j1.m_values() {
        let m2 = level.m - m1;
        if !j2.contains(m2) {
            continue;
        }
        let c = clebsch_gordan(j1, m1, j2, m2, level)?;
        psi[product_index(j1, m1, j2, m2)?] = C64::new(c, 0.0);
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn two_spin_half_values() {
        let h = SpinQuantum::from_twice(1);
        let triplet0 = CoupledLevel::new(half(2), half(0)).unwrap();
        let singlet = CoupledLevel::new(half(0), half(0)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = clebsch_gordan(h, half(1), h, half(-1), triplet0).unwrap();
        assert!((c - s).abs() < 1e-15);
        let c = clebsch_gordan(h, half(1), h, half(-1), singlet).unwrap();
        assert!((c - s).abs() < 1e-15);
        let c = clebsch_gordan(h, half(-1), h, half(1), singlet).unwrap();
        assert!((c + s).abs() < 1e-15);
    }

    #[test]
    fn selection_rule_gives_zero() {
        let j = SpinQuantum::from_twice(2);
        let level = CoupledLevel::new(half(2), half(0)).unwrap();
        assert_eq!(clebsch_gordan(j, half(2), j, half(0), level).unwrap(), 0.0);
    }

    #[test]
    fn rejects_inconsistent_numbers() {
        let h = SpinQuantum::from_twice(1);
        let bad_l = CoupledLevel { l: half(4), m: half(0) };
        assert!(clebsch_gordan(h, half(1), h, half(-1), bad_l).is_err());
        let ok = CoupledLevel::new(half(2), half(0)).unwrap();
        assert!(clebsch_gordan(h, half(3), h, half(-1), ok).is_err());
        assert!(CoupledLevel::new(half(2), half(1)).is_err());
        assert!(CoupledLevel::new(half(2), half(4)).is_err());
        // L = 1/2 has the wrong parity for two spin-1/2.
        let odd = CoupledLevel::new(half(1), half(1)).unwrap();
        assert!(coupled_basis_state(h, h, odd).is_err());
    }

    #[test]
    fn known_spin_one_values() {
        // <1 1; 1 -1 | 0 0> = 1/sqrt(3), <1 0; 1 0 | 0 0> = -1/sqrt(3),
        // <1 1; 1 -1 | 2 0> = 1/sqrt(6), <1 0; 1 0 | 2 0> = sqrt(2/3).
        let j = SpinQuantum::from_twice(2);
        let l0 = CoupledLevel::new(half(0), half(0)).unwrap();
        let l2 = CoupledLevel::new(half(4), half(0)).unwrap();
        let l1 = CoupledLevel::new(half(2), half(0)).unwrap();
        let cg = |m1, m2, lv| clebsch_gordan(j, half(m1), j, half(m2), lv).unwrap();
        assert!((cg(2, -2, l0) - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((cg(0, 0, l0) + 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((cg(2, -2, l2) - 1.0 / 6f64.sqrt()).abs() < 1e-14);
        assert!((cg(0, 0, l2) - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!(cg(0, 0, l1).abs() < 1e-14);
        assert!((cg(2, -2, l1) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn stretched_state_is_product() {
        let h = SpinQuantum::from_twice(1);
        let top = CoupledLevel::new(half(2), half(2)).unwrap();
        let psi = coupled_basis_state(h, h, top).unwrap();
        assert_eq!(psi[0], C64::new(1.0, 0.0));
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn level_enumeration_counts() {
        let (a, b) = (SpinQuantum::from_twice(3), SpinQuantum::from_twice(2));
        assert_eq!(CoupledLevel::all(a, b).len(), a.dim() * b.dim());
    }

    #[test]
    fn large_spin_stays_normalized() {
        let j = SpinQuantum::from_twice(60);
        for l in [0, 20, 60, 120] {
            let level = CoupledLevel::new(half(l), half(0)).unwrap();
            let psi = coupled_basis_state(j, j, level).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-10, "L = {}", l / 2);
        }
    }
}
