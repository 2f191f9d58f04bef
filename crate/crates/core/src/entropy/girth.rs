use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::EntropyError;

/// Largest `r^B` (in bits) evaluated exactly; beyond it only `log10 C` is reported.
pub const MAX_CONSTANT_BITS: u64 = 1 << 20;

/// The least integer strictly greater than `r^(3/c0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GirthConstant {
    pub r: u64,
    pub c0: BigRational,
    /// `3 / c0` in lowest terms.
    pub exponent: BigRational,
    /// `None` when `r^(3/c0)` exceeds [`MAX_CONSTANT_BITS`].
    pub value: Option<BigUint>,
    /// `(3 / c0) log10 r`, accurate to float precision.
    pub log10: f64,
}

impl Serialize for GirthConstant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GirthConstant", 6)?;
        match self.value.as_ref().map(|v| (v, v.to_u64())) {
            Some((_, Some(small))) => st.serialize_field("C", &small)?,
            Some((big, None)) => st.serialize_field("C", &big.to_string())?,
            None => st.serialize_field("C", &None::<u64>)?,
        }
        st.serialize_field("r", &self.r)?;
        st.serialize_field("c0", &super::ratio_string(&self.c0))?;
        st.serialize_field("exponent", &super::ratio_string(&self.exponent))?;
        st.serialize_field("log10_C", &self.log10)?;
        st.serialize_field("overflow", &self.value.is_none())?;
        st.end()
    }
}

/// The decimal number `x` prints as, as an exact rational (`0.3 -> 3/10`).
pub fn decimal_rational(x: f64) -> Result<BigRational, EntropyError> {
    if !x.is_finite() {
        return Err(EntropyError::InvalidParams(format!("{x} is not finite")));
    }
    let text = format!("{}", x.abs());
    let (int, frac) = text.split_once('.').unwrap_or((&text, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("float digits");
    let value = BigRational::new(digits, BigInt::from(10u8).pow(frac.len() as u32));
    Ok(if x < 0.0 { -value } else { value })
}

pub fn min_girth_constant(r: u64, c0: f64) -> Result<GirthConstant, EntropyError> {
    min_girth_constant_exact(r, &decimal_rational(c0)?)
}

/// With `3 / c0 = B / A` in lowest terms the answer is
/// `floor((r^B)^(1/A)) + 1`, computed with big integers.
pub fn min_girth_constant_exact(r: u64, c0: &BigRational) -> Result<GirthConstant, EntropyError> {
    if r < 2 {
        return Err(EntropyError::InvalidParams(format!("r = {r} must be at least 2")));
    }
    if !c0.is_positive() || *c0 >= BigRational::one() {
        return Err(EntropyError::InvalidParams(format!("c0 = {c0} must lie in (0, 1)")));
    }
    let exponent = BigRational::from_integer(BigInt::from(3)) / c0;
    let log10 = exponent.to_f64().unwrap_or(f64::INFINITY) * (r as f64).log10();
    let b = exponent.numer().to_biguint().expect("positive");
    let a = exponent.denom().to_biguint().expect("positive");
    let bits_per_factor = 64 - u64::from(r.leading_zeros());
    let value = match b.to_u64() {
        Some(b) if b.saturating_mul(bits_per_factor) <= MAX_CONSTANT_BITS => {
            let power = BigUint::from(r).pow(b as u32);
            let root = match a.to_u32() {
                Some(a) if u64::from(a) <= power.bits() => power.nth_root(a),
                // `power < 2^a`, so its real `a`-th root lies in [1, 2).
                _ => BigUint::one(),
            };
            Some(root + 1u32)
        }
        _ => None,
    };
    Ok(GirthConstant { r, c0: c0.clone(), exponent, value, log10 })
}
