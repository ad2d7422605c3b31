use num_complex::Complex64 as C64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2C {
    pub a: [[C64; 2]; 2],
}

impl Matrix2C {
    pub fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Self {
            a: [[a11, a12], [a21, a22]],
        }
    }

    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn sigma3() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }

    pub fn diag(a: C64, b: C64) -> Self {
        Self::new(a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), b)
    }

    pub fn from_columns(c1: [C64; 2], c2: [C64; 2]) -> Self {
        Self::new(c1[0], c2[0], c1[1], c2[1])
    }

    pub fn column(&self, j: usize) -> [C64; 2] {
        [self.a[0][j], self.a[1][j]]
    }

    pub fn trace(&self) -> C64 {
        self.a[0][0] + self.a[1][1]
    }

    pub fn det(&self) -> C64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn scale(&self, k: C64) -> Self {
        let a = self.a;
        Self::new(a[0][0] * k, a[0][1] * k, a[1][0] * k, a[1][1] * k)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let a = self.a;
        Some(Self::new(
            a[1][1] / d,
            -a[0][1] / d,
            -a[1][0] / d,
            a[0][0] / d,
        ))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let a = self.a;
        [
            a[0][0] * v[0] + a[0][1] * v[1],
            a[1][0] * v[0] + a[1][1] * v[1],
        ]
    }

    /// Solves self · x = b.
    pub fn solve(&self, b: [C64; 2]) -> Option<[C64; 2]> {
        self.inverse().map(|inv| inv.apply(b))
    }

    /// Eigenvalues, ordered with the larger real part first.
    pub fn eigenvalues(&self) -> (C64, C64) {
        let tr = self.trace();
        let disc = (tr * tr - self.det() * 4.0).sqrt();
        let (x, y) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
        if x.re >= y.re {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Max-abs entry norm.
    pub fn max_abs(&self) -> f64 {
        self.a
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    pub fn to_array(&self) -> [C64; 4] {
        [self.a[0][0], self.a[0][1], self.a[1][0], self.a[1][1]]
    }

    pub fn from_array(v: &[C64]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl Add for Matrix2C {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (self.a, o.a);
        Self::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl AddAssign for Matrix2C {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Matrix2C {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Matrix2C {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for Matrix2C {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self.a, o.a);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<C64> for Matrix2C {
    type Output = Self;
    fn mul(self, k: C64) -> Self {
        self.scale(k)
    }
}

impl Mul<f64> for Matrix2C {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let m = Matrix2C::new(
            C64::new(1.0, 2.0),
            C64::new(0.5, 0.0),
            C64::new(-1.0, 1.0),
            C64::new(3.0, -0.5),
        );
        let inv = m.inverse().unwrap();
        assert!((m * inv - Matrix2C::identity()).max_abs() < 1e-15);
        let (x, y) = m.eigenvalues();
        assert!((x + y - m.trace()).norm() < 1e-14);
        assert!((x * y - m.det()).norm() < 1e-14);
        let s3 = Matrix2C::sigma3();
        assert!((m.commutator(&s3).trace()).norm() < 1e-15);
        let b = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
        let x = m.solve(b).unwrap();
        let r = m.apply(x);
        assert!((r[0] - b[0]).norm() < 1e-15 && (r[1] - b[1]).norm() < 1e-15);
    }
}
