//! Minimal double-double arithmetic for cancellation-heavy series.
//!
//! A `Dd` is an unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2, giving
//! roughly 32 significant decimal digits. Only the handful of operations
//! needed by the Kummer series are implemented. Products rely on
//! `f64::mul_add`, which is exactly rounded.

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let s2 = s2 + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, x);
        let p2 = p2 + self.lo * x;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    /// Division by an ordinary f64, accurate to ~1e-31 relative.
    #[inline]
    pub fn div_f64(self, x: f64) -> Dd {
        let q1 = self.hi / x;
        let (p1, p2) = two_prod(q1, x);
        let r = ((self.hi - p1) - p2) + self.lo;
        let q2 = r / x;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    /// Full double-double division.
    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[cfg(test)]
    pub fn from_f64(re: f64, im: f64) -> CDd {
        CDd {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    #[inline]
    pub fn add(self, other: CDd) -> CDd {
        CDd {
            re: self.re.add(other.re),
            im: self.im.add(other.im),
        }
    }

    /// Multiply by a complex number given as two f64 components.
    #[inline]
    pub fn mul_c64(self, re: f64, im: f64) -> CDd {
        CDd {
            re: self.re.mul_f64(re).sub(self.im.mul_f64(im)),
            im: self.re.mul_f64(im).add(self.im.mul_f64(re)),
        }
    }

    /// Divide by a complex number given as two f64 components.
    #[inline]
    pub fn div_c64(self, re: f64, im: f64) -> CDd {
        if im == 0.0 {
            return CDd {
                re: self.re.div_f64(re),
                im: self.im.div_f64(re),
            };
        }
        // (self * conj(q)) / |q|^2 with |q|^2 in double-double
        let num = self.mul_c64(re, -im);
        let (p1, p2) = two_prod(re, re);
        let (q1, q2) = two_prod(im, im);
        let d = Dd { hi: p1, lo: p2 }.add(Dd { hi: q1, lo: q2 });
        CDd {
            re: num.re.div(d),
            im: num.im.div(d),
        }
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}
