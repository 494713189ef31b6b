//! Double-double complex arithmetic (about 32 significant digits) for the
//! few places where long cancelling sums would otherwise lose accuracy.

use num_complex::Complex64;

/// `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub(crate) fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick(s, e + t);
        let (hi, lo) = quick(s, e + f);
        Dd { hi, lo }
    }

    pub(crate) fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub(crate) fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick(p, e);
        Dd { hi, lo }
    }

    pub(crate) fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn quick(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DdComplex {
    re: Dd,
    im: Dd,
}

impl From<Complex64> for DdComplex {
    fn from(z: Complex64) -> Self {
        DdComplex { re: Dd::new(z.re), im: Dd::new(z.im) }
    }
}

impl DdComplex {
    pub(crate) const ZERO: DdComplex = DdComplex { re: Dd::ZERO, im: Dd::ZERO };
    pub(crate) const ONE: DdComplex = DdComplex { re: Dd { hi: 1.0, lo: 0.0 }, im: Dd::ZERO };

    pub(crate) fn add(self, o: DdComplex) -> DdComplex {
        DdComplex { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub(crate) fn mul(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub(crate) fn mul_f64(self, b: Complex64) -> DdComplex {
        DdComplex {
            re: self.re.mul_f64(b.re).add(self.im.mul_f64(b.im).neg()),
            im: self.re.mul_f64(b.im).add(self.im.mul_f64(b.re)),
        }
    }

    pub(crate) fn round(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}
