//! Double-double arithmetic: unevaluated sums `hi + lo` of two f64 values
//! giving roughly 106 bits of significand.
//!
//! The parent module evaluates ascending series for K_0 and K_1 whose partial
//! sums cancel against a logarithmic term that grows like I_0(z) ~ e^|z|; at
//! |z| = 8 about four decimal digits cancel and plain f64 arithmetic leaves
//! only ~1e-10 relative accuracy in the result. Carrying the series and the
//! complex logarithm in double-double precision removes that loss entirely.
//!
//! The error-free transformations (`two_sum`, `two_prod`) and the add, mul,
//! div and sqrt algorithms are the classical ones of Dekker and of Hida,
//! Li and Bailey's QD library. `two_prod` relies on a fused multiply-add.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(super) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Errorless sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Errorless sum assuming `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Errorless product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// Euler-Mascheroni constant.
    pub const EULER_GAMMA: Dd = Dd {
        hi: 0.5772156649015329,
        lo: -4.942915152430645e-18,
    };
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    pub const FRAC_PI_2: Dd = Dd {
        hi: 1.5707963267948966,
        lo: 6.123233995736766e-17,
    };
    pub const LN_2: Dd = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };
    pub const TWO_OVER_PI: Dd = Dd {
        hi: 0.6366197723675814,
        lo: -3.935735335036497e-17,
    };

    #[inline]
    pub fn from_f64(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    pub fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn add_f64(self, rhs: f64) -> Dd {
        self.add(Dd::from_f64(rhs))
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        self.mul(Dd::from_f64(rhs))
    }

    #[inline]
    pub fn div_f64(self, rhs: f64) -> Dd {
        self.div(Dd::from_f64(rhs))
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn ldexp(self, e: i32) -> Dd {
        let f = (e as f64).exp2();
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    /// Square root by one Newton step on the f64 estimate; exact for zero.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        let y0 = self.hi.sqrt();
        // y1 = (y0 + self / y0) / 2 doubles the 53 accurate bits of y0.
        self.div(Dd::from_f64(y0)).add_f64(y0).ldexp(-1)
    }

    /// Natural logarithm for positive arguments.
    ///
    /// Reduces to `x = m * 2^e` with `m` near 1, then sums the series
    /// `ln m = 2 atanh(u)` with `u = (m - 1)/(m + 1)`, `|u| <= 1/3`.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0, "Dd::ln requires a positive argument");
        let e = self.hi.log2().floor() as i32;
        let m = self.ldexp(-e);
        let u = m.add_f64(-1.0).div(m.add_f64(1.0));
        let u2 = u.mul(u);
        let mut term = u;
        let mut sum = u;
        let mut k = 1usize;
        loop {
            term = term.mul(u2);
            let next = term.div_f64((2 * k + 1) as f64);
            sum = sum.add(next);
            k += 1;
            if next.hi.abs() <= sum.hi.abs() * 1e-35 || k > 60 {
                break;
            }
        }
        sum.ldexp(1).add(Dd::LN_2.mul_f64(e as f64))
    }

    /// Arctangent for `|x| <= 1`, by two angle-halvings and a Taylor series.
    ///
    /// Each halving maps `t` to `t / (1 + sqrt(1 + t^2))`, leaving
    /// `|t| <= tan(pi/16) ~ 0.199`, where the alternating series converges
    /// to double-double accuracy in about 25 terms. Odd in `x` by
    /// construction, so conjugate symmetry of complex arguments is exact.
    fn atan_unit(self) -> Dd {
        let mut t = self;
        for _ in 0..2 {
            let denom = t.mul(t).add_f64(1.0).sqrt().add_f64(1.0);
            t = t.div(denom);
        }
        let t2 = t.mul(t);
        let mut term = t;
        let mut sum = t;
        let mut k = 1usize;
        loop {
            term = term.mul(t2).neg();
            let next = term.div_f64((2 * k + 1) as f64);
            sum = sum.add(next);
            k += 1;
            if next.hi.abs() <= (sum.hi.abs() + 1e-300) * 1e-35 || k > 60 {
                break;
            }
        }
        sum.ldexp(2)
    }

    /// Four-quadrant arctangent of `y / x`. Only needs the quadrants hit by
    /// logarithms of right-half-plane arguments, but handles all four.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if y.hi == 0.0 && y.lo == 0.0 {
            return if x.hi >= 0.0 { Dd::ZERO } else { Dd::PI };
        }
        if x.hi == 0.0 && x.lo == 0.0 {
            return if y.hi > 0.0 {
                Dd::FRAC_PI_2
            } else {
                Dd::FRAC_PI_2.neg()
            };
        }
        let ax = x.abs();
        let ay = y.abs();
        if ay.hi <= ax.hi {
            let base = y.div(x).atan_unit();
            if x.hi > 0.0 {
                base
            } else if y.hi >= 0.0 {
                base.add(Dd::PI)
            } else {
                base.sub(Dd::PI)
            }
        } else {
            let base = x.div(y).atan_unit();
            if y.hi > 0.0 {
                Dd::FRAC_PI_2.sub(base)
            } else {
                Dd::FRAC_PI_2.neg().sub(base)
            }
        }
    }
}

/// Complex number with double-double real and imaginary parts.
#[derive(Clone, Copy, Debug)]
pub(super) struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: DdC = DdC {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> DdC {
        DdC { re, im }
    }

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> DdC {
        DdC {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    #[inline]
    pub fn to_complex(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, rhs: DdC) -> DdC {
        DdC::new(self.re.add(rhs.re), self.im.add(rhs.im))
    }

    pub fn sub(self, rhs: DdC) -> DdC {
        DdC::new(self.re.sub(rhs.re), self.im.sub(rhs.im))
    }

    pub fn neg(self) -> DdC {
        DdC::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(self, rhs: DdC) -> DdC {
        DdC::new(
            self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        )
    }

    pub fn div(self, rhs: DdC) -> DdC {
        let denom = rhs.re.mul(rhs.re).add(rhs.im.mul(rhs.im));
        DdC::new(
            self.re.mul(rhs.re).add(self.im.mul(rhs.im)).div(denom),
            self.im.mul(rhs.re).sub(self.re.mul(rhs.im)).div(denom),
        )
    }

    #[inline]
    pub fn scale(self, s: Dd) -> DdC {
        DdC::new(self.re.mul(s), self.im.mul(s))
    }

    #[inline]
    pub fn scale_f64(self, s: f64) -> DdC {
        DdC::new(self.re.mul_f64(s), self.im.mul_f64(s))
    }

    #[inline]
    pub fn div_dd(self, s: Dd) -> DdC {
        DdC::new(self.re.div(s), self.im.div(s))
    }

    /// Multiplication by the imaginary unit (exact).
    #[inline]
    pub fn mul_i(self) -> DdC {
        DdC::new(self.im.neg(), self.re)
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.mul(self.re).add(self.im.mul(self.im))
    }

    /// Principal branch logarithm: `ln|z| + i arg(z)`.
    pub fn ln(self) -> DdC {
        DdC::new(
            self.norm_sqr().ln().ldexp(-1),
            Dd::atan2(self.im, self.re),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_reaches_double_double_accuracy() {
        // 1/3 to ~1e-32: the f64 quotient alone is only good to ~1e-17.
        let third = Dd::ONE.div_f64(3.0);
        let back = third.mul_f64(3.0).sub(Dd::ONE);
        assert!(back.to_f64().abs() < 1e-31);

        let r = Dd::from_f64(2.0).sqrt();
        let resid = r.mul(r).add_f64(-2.0);
        assert!(resid.to_f64().abs() < 1e-31);
    }

    #[test]
    fn logarithm_and_arctangent_match_reference_values() {
        // ln 2 against the stored constant.
        let l2 = Dd::from_f64(2.0).ln().sub(Dd::LN_2);
        assert!(l2.to_f64().abs() < 1e-31);
        // ln(e) with e split across hi/lo.
        let e = Dd {
            hi: 2.718281828459045,
            lo: 1.4456468917292502e-16,
        };
        assert!(e.ln().add_f64(-1.0).to_f64().abs() < 1e-31);
        // atan2(1, 1) = pi/4.
        let q = Dd::atan2(Dd::ONE, Dd::ONE).sub(Dd::PI.ldexp(-2));
        assert!(q.to_f64().abs() < 1e-31);
        // Odd symmetry must be bit-exact for conjugate symmetry downstream.
        let a = Dd::atan2(Dd::from_f64(0.7), Dd::from_f64(1.3));
        let b = Dd::atan2(Dd::from_f64(-0.7), Dd::from_f64(1.3));
        assert_eq!(a.hi, -b.hi);
        assert_eq!(a.lo, -b.lo);
    }

    #[test]
    fn complex_log_gives_modulus_and_argument() {
        // ln(i) = i pi/2 up to double-double rounding.
        let l = DdC::from_f64(0.0, 1.0).ln();
        assert!(l.re.to_f64().abs() < 1e-31);
        assert!(l.im.sub(Dd::FRAC_PI_2).to_f64().abs() < 1e-31);
        // ln(3+4i): |z| = 5.
        let l = DdC::from_f64(3.0, 4.0).ln();
        assert!(l.re.sub(Dd::from_f64(5.0).ln()).to_f64().abs() < 1e-31);
        assert!((l.im.to_f64() - (4.0f64).atan2(3.0)).abs() < 1e-15);
    }
}
