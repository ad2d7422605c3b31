use super::matrix::Matrix2C;
use crate::rabi::RabiParams;
use num_complex::Complex64 as C64;

/// Φ'(z) = (σ₃/2 + A₀/z + A_t/(z−t)) Φ(z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    pub a0: Matrix2C,
    pub at: Matrix2C,
    pub t: C64,
}

impl SystemSpec {
    pub fn new(a0: Matrix2C, at: Matrix2C, t: C64) -> Self {
        Self { a0, at, t }
    }

    /// Coefficient matrix at z.
    pub fn coefficient(&self, z: C64) -> Matrix2C {
        Matrix2C::sigma3() * 0.5 + self.a0.scale(1.0 / z) + self.at.scale(1.0 / (z - self.t))
    }

    /// Eigenvalue differences of A₀ and A_t.
    pub fn local_exponents(&self) -> (C64, C64) {
        let (a, b) = self.a0.eigenvalues();
        let (c, d) = self.at.eigenvalues();
        (a - b, c - d)
    }

    /// Conjugates both residues by D.
    pub fn conjugate_by(&self, d: &Matrix2C) -> Option<Self> {
        let inv = d.inverse()?;
        Some(Self {
            a0: *d * self.a0 * inv,
            at: *d * self.at * inv,
            t: self.t,
        })
    }
}

/// A₀ = [[θ, −Δ], [0, 0]], A_t = [[0, 0], [−Δ, θ]] with θ = E + g² and t = −4g².
pub fn system_from_rabi(p: &RabiParams) -> SystemSpec {
    let th = p.theta();
    let d = C64::new(-p.delta, 0.0);
    let z = C64::new(0.0, 0.0);
    SystemSpec {
        a0: Matrix2C::new(th, d, z, z),
        at: Matrix2C::new(z, z, d, th),
        t: C64::new(p.t(), 0.0),
    }
}
