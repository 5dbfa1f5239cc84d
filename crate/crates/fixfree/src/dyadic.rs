use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// An exact nonnegative dyadic rational `num / 2^log2_den`.
///
/// Kept in lowest terms: the numerator is odd unless the denominator
/// exponent is zero; the value zero is `0 / 2^0`.  Comparison, addition and
/// subtraction are exact, so Kraft sums and thresholds carry no rounding.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DyadicRational {
    num: BigUint,
    log2_den: u32,
}

impl DyadicRational {
    pub fn new(num: BigUint, log2_den: u32) -> Self {
        let mut d = DyadicRational { num, log2_den };
        d.canonicalize();
        d
    }

    pub fn new_u64(num: u64, log2_den: u32) -> Self {
        Self::new(BigUint::from(num), log2_den)
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.log2_den = 0;
            return;
        }
        if let Some(tz) = self.num.trailing_zeros() {
            let shift = (tz as u32).min(self.log2_den);
            if shift > 0 {
                self.num >>= shift;
                self.log2_den -= shift;
            }
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_den
    }

    pub fn is_integer(&self) -> bool {
        self.log2_den == 0
    }

    /// Multiply by `2^k`.
    pub fn shl_pow2(&self, k: u32) -> Self {
        if self.log2_den >= k {
            DyadicRational { num: self.num.clone(), log2_den: self.log2_den - k }
        } else {
            DyadicRational { num: &self.num << (k - self.log2_den), log2_den: 0 }
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigUint {
        &self.num >> self.log2_den
    }

    pub fn floor_u64(&self) -> Option<u64> {
        self.floor().to_u64()
    }

    /// Exact integer value, if the value is an integer.
    pub fn to_u64_exact(&self) -> Option<u64> {
        if self.is_integer() {
            self.num.to_u64()
        } else {
            None
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        let den = self.log2_den.max(rhs.log2_den);
        let a = &self.num << (den - self.log2_den);
        let b = &rhs.num << (den - rhs.log2_den);
        if a < b {
            return None;
        }
        Some(Self::new(a - b, den))
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::INFINITY);
        n * (-(self.log2_den as f64)).exp2()
    }

    /// The exact value of a finite nonnegative `f64` (every finite double is
    /// a dyadic rational).  `None` for negative, NaN, or infinite inputs.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        if !x.is_finite() || x.is_sign_negative() && x != 0.0 {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, e) = if exp == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        if e >= 0 {
            Some(Self::new(BigUint::from(mantissa) << e as u32, 0))
        } else {
            Some(Self::new(BigUint::from(mantissa), (-e) as u32))
        }
    }
}

impl Zero for DyadicRational {
    fn zero() -> Self {
        DyadicRational { num: BigUint::zero(), log2_den: 0 }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for DyadicRational {
    fn one() -> Self {
        DyadicRational { num: BigUint::one(), log2_den: 0 }
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: Self) -> DyadicRational {
        let den = self.log2_den.max(rhs.log2_den);
        let a = &self.num << (den - self.log2_den);
        let b = &rhs.num << (den - rhs.log2_den);
        DyadicRational::new(a + b, den)
    }
}

impl AddAssign<&DyadicRational> for DyadicRational {
    fn add_assign(&mut self, rhs: &DyadicRational) {
        *self = &*self + rhs;
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;

    fn sub(self, rhs: Self) -> DyadicRational {
        self.checked_sub(rhs).expect("dyadic subtraction underflow")
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;

    fn mul(self, rhs: Self) -> DyadicRational {
        DyadicRational::new(&self.num * &rhs.num, self.log2_den + rhs.log2_den)
    }
}

impl Mul for DyadicRational {
    type Output = DyadicRational;

    fn mul(self, rhs: Self) -> DyadicRational {
        &self * &rhs
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let den = self.log2_den.max(other.log2_den);
        let a = &self.num << (den - self.log2_den);
        let b = &other.num << (den - other.log2_den);
        a.cmp(&b)
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigUint::one() << self.log2_den)
        }
    }
}
