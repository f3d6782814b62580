//! Fixed-point midpoint-radius arithmetic: a value `mid · 2^-prec` with
//! error at most `rad · 2^-prec`. Every operation rounds outward, and the
//! transcendental functions carry explicit series remainders.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn pow2(p: u32) -> BigInt {
    BigInt::one() << p as usize
}

/// `ceil(a / b)` for `a >= 0`, `b > 0`.
fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

impl CertifiedReal {
    pub fn zero(prec: u32) -> Self {
        CertifiedReal {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        CertifiedReal {
            mid: v.into() << prec as usize,
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let scaled = q.numer() << prec as usize;
        let (mid, r) = scaled.div_mod_floor(q.denom());
        CertifiedReal {
            mid,
            rad: if r.is_zero() { BigInt::zero() } else { BigInt::one() },
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn scale(&self) -> BigInt {
        pow2(self.prec)
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(self.mid.clone(), self.scale())
    }

    pub fn rad(&self) -> BigRational {
        BigRational::new(self.rad.clone(), self.scale())
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, self.scale())
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, self.scale())
    }

    /// Upper bound of `|x|`.
    pub fn abs_upper(&self) -> BigRational {
        BigRational::new(self.mid.abs() + &self.rad, self.scale())
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// A double no smaller than the radius.
    pub fn rad_f64(&self) -> f64 {
        let r = self.rad().to_f64().unwrap_or(f64::INFINITY);
        if r == 0.0 && !self.rad.is_zero() {
            f64::MIN_POSITIVE
        } else {
            r * (1.0 + 4.0 * f64::EPSILON)
        }
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    /// Adds `extra >= 0` to the radius, rounded up.
    pub fn widen(&self, extra: &BigRational) -> Self {
        let scaled = extra * BigRational::from_integer(self.scale());
        let up = scaled.ceil().to_integer();
        CertifiedReal {
            mid: self.mid.clone(),
            rad: &self.rad + up.max(BigInt::zero()),
            prec: self.prec,
        }
    }

    fn same(&self, o: &Self) {
        assert_eq!(self.prec, o.prec, "mixed precisions");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same(o);
        CertifiedReal {
            mid: &self.mid + &o.mid,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same(o);
        CertifiedReal {
            mid: &self.mid - &o.mid,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedReal {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same(o);
        let p = self.prec as usize;
        let prod = &self.mid * &o.mid;
        let mid = prod.clone() >> p; // floor
        let exact = (&mid << p) == prod;
        let spread = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let mut rad = ceil_div(&spread, &pow2(self.prec));
        if !exact {
            rad += 1;
        }
        CertifiedReal {
            mid,
            rad,
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        CertifiedReal {
            mid: &self.mid * k,
            rad: &self.rad * k.abs(),
            prec: self.prec,
        }
    }

    /// Division by a non-zero integer.
    pub fn div_int(&self, d: &BigInt) -> Self {
        assert!(!d.is_zero(), "division by zero");
        let (q, r) = self.mid.div_mod_floor(d);
        let mut rad = ceil_div(&self.rad, &d.abs());
        if !r.is_zero() {
            rad += 1;
        }
        CertifiedReal {
            mid: q,
            rad,
            prec: self.prec,
        }
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        self.mul(&CertifiedReal::from_rational(q, self.prec))
    }

    pub fn sign(&self) -> Sign {
        self.mid.sign()
    }
}

/// `atan(1/x)` for an integer `x >= 2`.
fn atan_inv(x: u32, prec: u32) -> CertifiedReal {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = pow2(prec) / &x;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
        terms += 1;
    }
    // Each truncated quotient is off by at most 3 units; the alternating tail
    // is below the first omitted term, which truncated to zero.
    CertifiedReal {
        mid: sum,
        rad: BigInt::from(3 * terms + 4),
        prec,
    }
}

/// `π = 16 atan(1/5) − 4 atan(1/239)`.
pub fn pi(prec: u32) -> CertifiedReal {
    let a = atan_inv(5, prec).mul_int(&BigInt::from(16));
    let b = atan_inv(239, prec).mul_int(&BigInt::from(4));
    a.sub(&b)
}

/// `cos(2π t)` for the true argument anywhere in `[t − width, t + width]`.
pub fn cos_two_pi(t: &BigRational, width: &BigRational, pi: &CertifiedReal) -> CertifiedReal {
    let reduced = t - t.round();
    let two = BigRational::from_integer(2.into());
    let theta = pi
        .mul_rational(&(&two * &reduced))
        .widen(&(two * pi.upper() * width));
    cos_taylor(&theta)
}

/// Taylor series of `cos` with the Lagrange remainder
/// `|θ|^(2N+2) / (2N+2)!`.
pub fn cos_taylor(theta: &CertifiedReal) -> CertifiedReal {
    let prec = theta.prec();
    let sq = theta.mul(theta);
    // |θ| rounded up to a multiple of 2^-10 keeps the remainder arithmetic small
    let k = BigRational::from_integer(1024.into());
    let bound = (theta.abs_upper() * &k).ceil() / k;
    let target = BigRational::new(BigInt::one(), pow2(prec));
    let mut sum = CertifiedReal::from_int(1, prec);
    let mut term = CertifiedReal::from_int(1, prec);
    // remainder after the term of index j is at most bound^(2j+2)/(2j+2)!
    let mut rem = BigRational::one();
    let mut j: u64 = 0;
    loop {
        j += 1;
        let d = BigInt::from((2 * j - 1) * (2 * j));
        term = term.mul(&sq).div_int(&d).neg();
        sum = sum.add(&term);
        rem = rem * &bound * &bound / BigRational::from_integer(d.clone());
        let next = &rem * &bound * &bound
            / BigRational::from_integer(BigInt::from((2 * j + 1) * (2 * j + 2)));
        if next < target || j > 4 * prec as u64 {
            return sum.widen(&next);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pi_enclosure() {
        let p = pi(256);
        assert!(p.lower() > r(333, 106));
        assert!(p.upper() < r(355, 113));
        assert!((p.mid_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.rad_f64() < 1e-70);
    }

    #[test]
    fn cos_values() {
        let p = pi(256);
        let z = BigRational::zero();
        let c = cos_two_pi(&r(1, 6), &z, &p);
        assert!(c.contains(&r(1, 2)), "{:?}", c.mid_f64());
        assert!(c.rad_f64() < 1e-70);
        let c = cos_two_pi(&r(5, 4), &z, &p);
        assert!(c.abs_upper() < r(1, 1_000_000_000));
        let c = cos_two_pi(&r(3, 7), &z, &p);
        assert!((c.mid_f64() - (std::f64::consts::TAU * 3.0 / 7.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_is_outward() {
        let a = CertifiedReal::from_rational(&r(1, 3), 64);
        let b = a.mul(&a);
        assert!(b.contains(&r(1, 9)));
        let c = a.div_int(&BigInt::from(7));
        assert!(c.contains(&r(1, 21)));
        assert!(a.sub(&a).contains(&BigRational::zero()));
    }
}
