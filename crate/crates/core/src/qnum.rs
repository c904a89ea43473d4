//! Exact rational arithmetic and q-series primitives.
//!
//! [`ExactScalar`] is an arbitrary-precision rational kept in lowest terms.
//! Everything downstream (coefficients, rates, weights) is built from the
//! functions here, so no floating point enters the algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always normalized with a positive denominator.
pub type ExactScalar = BigRational;

const POW_CACHE: i64 = 48;

/// Integer as an exact scalar.
pub fn int(v: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(v))
}

/// `num/den` as an exact scalar.
pub fn ratio(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"p/d"` or `"p"`.
pub fn parse_scalar(s: &str) -> Result<ExactScalar> {
    let t = s.trim();
    let bad = || Error::ParseScalar(s.to_string());
    match t.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Serialize as `"p/d"` (or `"p"` for integers); inverse of [`parse_scalar`].
pub fn format_scalar(x: &ExactScalar) -> String {
    x.to_string()
}

/// Lossy conversion used only at sampling and reporting boundaries.
pub fn to_f64(x: &ExactScalar) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: scale down by bit length first
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = (nb.max(db) - 900).max(0) as usize;
        let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// `x^e` for any integer `e` (x must be nonzero when `e < 0`).
pub fn pow(x: &ExactScalar, e: i64) -> ExactScalar {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// `(a; q)_n = Π_{k=0}^{n-1} (1 - a q^k)`.
///
/// ```
/// use qtoda::qnum::{q_pochhammer, ratio};
/// let q = ratio(1, 2);
/// assert_eq!(q_pochhammer(&q, &q, 2), ratio(3, 8));
/// ```
pub fn q_pochhammer(a: &ExactScalar, q: &ExactScalar, n: u32) -> ExactScalar {
    let mut out = ExactScalar::one();
    let mut term = a.clone();
    for _ in 0..n {
        out *= ExactScalar::one() - &term;
        term *= q;
    }
    out
}

/// Gaussian binomial `(q)_n / ((q)_k (q)_{n-k})`, zero outside `0 <= k <= n`.
pub fn q_binomial(n: i64, k: i64, q: &ExactScalar) -> ExactScalar {
    if n < 0 || k < 0 || k > n {
        return ExactScalar::zero();
    }
    let qn = |m: i64| q_pochhammer(q, q, m as u32);
    qn(n) / (qn(k) * qn(n - k))
}

/// Drift parameters `α` and the base `q`.
///
/// `α_k` beyond the stored length are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DriftParams {
    alpha: Vec<u32>,
    q: ExactScalar,
    prefix: Vec<i64>,
    pow_cache: Vec<ExactScalar>,
}

impl DriftParams {
    pub fn new(alpha: Vec<u32>, q: ExactScalar) -> Result<Self> {
        if !(q > ExactScalar::zero() && q < ExactScalar::one()) {
            return Err(Error::QOutOfRange(q.to_string()));
        }
        let mut prefix = vec![0i64];
        for a in &alpha {
            prefix.push(prefix.last().unwrap() + *a as i64);
        }
        let pow_cache = (-POW_CACHE..=POW_CACHE).map(|e| pow(&q, e)).collect();
        Ok(DriftParams { alpha, q, prefix, pow_cache })
    }

    /// Zero drift.
    pub fn driftless(q: ExactScalar) -> Result<Self> {
        Self::new(Vec::new(), q)
    }

    pub fn q(&self) -> &ExactScalar {
        &self.q
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    /// Same `α`, different `q`.
    pub fn with_q(&self, q: ExactScalar) -> Result<Self> {
        Self::new(self.alpha.clone(), q)
    }

    pub fn is_driftless(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0)
    }

    /// `α_k` (1-based); zero out of range.
    pub fn alpha_k(&self, k: i64) -> i64 {
        if k < 1 {
            return 0;
        }
        self.alpha.get(k as usize - 1).map_or(0, |&a| a as i64)
    }

    /// `S(k) = α_1 + … + α_k`, zero for `k <= 0`.
    pub fn partial(&self, k: i64) -> i64 {
        if k <= 0 {
            0
        } else if (k as usize) < self.prefix.len() {
            self.prefix[k as usize]
        } else {
            *self.prefix.last().unwrap()
        }
    }

    /// `α_{ij} = α_i + … + α_j`.
    pub fn alpha_range(&self, i: i64, j: i64) -> i64 {
        if j < i {
            0
        } else {
            self.partial(j) - self.partial(i - 1)
        }
    }

    /// `β_{ij} = α_i + … + α_{i+j-1}`.
    pub fn beta(&self, i: i64, j: i64) -> i64 {
        self.partial(i + j - 1) - self.partial(i - 1)
    }

    /// Exponent of `z_{i,j} = q^{S(j) - S(i)}`; negative for `i > j`.
    pub fn z_exp(&self, i: i64, j: i64) -> i64 {
        self.partial(j) - self.partial(i)
    }

    /// `z_{i,j} = Π_{k=i+1}^{j} z_k`.
    pub fn z(&self, i: i64, j: i64) -> ExactScalar {
        self.qpow(self.z_exp(i, j))
    }

    /// `z_k = q^{α_k}`.
    pub fn z_k(&self, k: i64) -> ExactScalar {
        self.qpow(self.alpha_k(k))
    }

    /// `q^e`.
    pub fn qpow(&self, e: i64) -> ExactScalar {
        if e.abs() <= POW_CACHE {
            self.pow_cache[(e + POW_CACHE) as usize].clone()
        } else {
            pow(&self.q, e)
        }
    }

    /// `1 - q^e`.
    pub fn one_minus_qpow(&self, e: i64) -> ExactScalar {
        if e == 0 {
            ExactScalar::zero()
        } else {
            ExactScalar::one() - self.qpow(e)
        }
    }

    /// `(q^a; q)_m`, extended to `m < 0` by `(q^a;q)_m = Π_{k=1}^{|m|} 1/(1 - q^{a-k})`.
    ///
    /// Returns `None` where the extension has a pole.
    pub fn qpoch_pow(&self, a: i64, m: i64) -> Option<ExactScalar> {
        let mut out = ExactScalar::one();
        if m >= 0 {
            for k in 0..m {
                out *= self.one_minus_qpow(a + k);
            }
            Some(out)
        } else {
            for k in 1..=-m {
                let f = self.one_minus_qpow(a - k);
                if f.is_zero() {
                    return None;
                }
                out *= f;
            }
            Some(out.recip())
        }
    }

    /// `1 / (q^a; q)_m`, zero at poles of `(q^a;q)_m`.
    pub fn inv_qpoch_pow(&self, a: i64, m: i64) -> ExactScalar {
        match self.qpoch_pow(a, m) {
            Some(v) if !v.is_zero() => v.recip(),
            Some(_) => panic!("1/(q^{a};q)_{m} is singular"),
            None => ExactScalar::zero(),
        }
    }

    /// `(q)_m`, and `1/(q)_m` (zero for `m < 0`).
    pub fn qfact(&self, m: i64) -> ExactScalar {
        self.qpoch_pow(1, m).unwrap_or_else(ExactScalar::zero)
    }

    pub fn inv_qfact(&self, m: i64) -> ExactScalar {
        self.inv_qpoch_pow(1, m)
    }

    /// Gaussian binomial in this `q`.
    pub fn binom(&self, n: i64, k: i64) -> ExactScalar {
        if n < 0 || k < 0 || k > n {
            return ExactScalar::zero();
        }
        self.qfact(n) / (self.qfact(k) * self.qfact(n - k))
    }
}

impl fmt::Display for DriftParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} alpha={:?}", self.q, self.alpha)
    }
}

/// Exact absolute value.
pub fn abs(x: &ExactScalar) -> ExactScalar {
    x.abs()
}

/// Max of `|x|` over an iterator; zero when empty.
pub fn max_abs<'a, I: IntoIterator<Item = &'a ExactScalar>>(it: I) -> ExactScalar {
    it.into_iter().map(|x| x.abs()).fold(ExactScalar::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_basics() {
        let q = ratio(1, 2);
        assert_eq!(q_pochhammer(&int(5), &q, 0), int(1));
        assert_eq!(q_pochhammer(&q, &q, 2), ratio(3, 8));
        assert_eq!(q_pochhammer(&int(2), &q, 1), int(-1));
        assert_eq!(q_pochhammer(&int(1), &q, 3), int(0));
    }

    #[test]
    fn binomial_values() {
        let q = ratio(1, 2);
        assert_eq!(q_binomial(7, 0, &q), int(1));
        assert_eq!(q_binomial(2, 1, &q), ratio(3, 2));
        assert_eq!(q_binomial(4, 2, &q), ratio(35, 16));
        assert_eq!(q_binomial(3, 4, &q), int(0));
        assert_eq!(q_binomial(3, -1, &q), int(0));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["1/2", "2/3", "-7/9", "24"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(parse_scalar("2/4").unwrap(), ratio(1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn drift_sums() {
        let d = DriftParams::new(vec![1, 0, 2], ratio(1, 2)).unwrap();
        assert_eq!(d.partial(0), 0);
        assert_eq!(d.partial(3), 3);
        assert_eq!(d.partial(10), 3);
        assert_eq!(d.beta(2, 2), 2);
        assert_eq!(d.alpha_range(1, 3), 3);
        assert_eq!(d.z(0, 3), ratio(1, 8));
        assert_eq!(d.z(3, 1), int(4));
        assert_eq!(d.z(0, 1) * d.z(1, 3), d.z(0, 3));
        assert!(DriftParams::new(vec![], int(1)).is_err());
        assert!(DriftParams::new(vec![], int(0)).is_err());
    }

    #[test]
    fn beta_matches_z() {
        let d = DriftParams::new(vec![2, 1, 0, 3], ratio(2, 3)).unwrap();
        for i in 0..4 {
            for j in 1..4 {
                assert_eq!(d.z(i, i + j - 1), d.qpow(d.beta(i + 1, j - 1)));
            }
        }
    }

    #[test]
    fn negative_pochhammer() {
        let d = DriftParams::driftless(ratio(1, 2)).unwrap();
        // (q^3;q)_{-1} = 1/(1-q^2)
        assert_eq!(d.qpoch_pow(3, -1).unwrap(), ratio(4, 3));
        assert_eq!(d.qpoch_pow(1, -1), None);
        assert_eq!(d.inv_qfact(-2), int(0));
    }
}
