use num_complex::Complex64;
use std::ops::{Mul, Sub};

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Eigenvalues of a 2x2 matrix, ordered by decreasing modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

impl EigenPair {
    pub fn spectral_radius(&self) -> f64 {
        self.lambda1.norm()
    }

    pub fn is_real(&self) -> bool {
        self.lambda1.im == 0.0 && self.lambda2.im == 0.0
    }
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn frobenius(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    pub fn eigenvalues(&self) -> EigenPair {
        let t = self.trace();
        let disc = t * t - 4.0 * self.det();
        let (l1, l2) = if disc >= 0.0 {
            let s = disc.sqrt();
            // Avoid cancellation: the larger root first, the other from the product.
            let big = if t >= 0.0 { (t + s) / 2.0 } else { (t - s) / 2.0 };
            let small = if big != 0.0 { self.det() / big } else { 0.0 };
            (Complex64::new(big, 0.0), Complex64::new(small, 0.0))
        } else {
            let s = (-disc).sqrt() / 2.0;
            (Complex64::new(t / 2.0, s), Complex64::new(t / 2.0, -s))
        };
        if l1.norm() >= l2.norm() {
            EigenPair {
                lambda1: l1,
                lambda2: l2,
            }
        } else {
            EigenPair {
                lambda1: l2,
                lambda2: l1,
            }
        }
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}
