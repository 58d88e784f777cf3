//! Expected number of distinct values among `k` uniform draws from `n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StirlingExpectation {
    /// `n(1 − (1 − 1/n)^k)`, as `numerator/denominator` in lowest terms.
    #[serde(serialize_with = "ser_ratio")]
    pub value: BigRational,
    /// `value ≥ (1 − 1/e) k`
    pub bound_holds: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn stirling_expected(n: u64, k: u64) -> Result<StirlingExpectation> {
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ k ≤ n, got n={n}, k={k}")));
    }
    let big_n = BigRational::from_integer(BigInt::from(n));
    let q = BigRational::one() - BigRational::one() / &big_n;
    let mut qk = BigRational::one();
    for _ in 0..k {
        qk *= &q;
    }
    let value = big_n * (BigRational::one() - qk);
    let approx = value.to_f64().unwrap_or(f64::NAN);
    let bound = (1.0 - (-1.0f64).exp()) * k as f64;
    Ok(StirlingExpectation { bound_holds: approx >= bound, value })
}
