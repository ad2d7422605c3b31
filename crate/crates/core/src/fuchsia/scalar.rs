//! Elimination of the second row: the first-row entries of Φ satisfy
//!
//! f'' + p f' + q f = 0,
//! p = (1−θ₀)/z + (1−θ_t)/(z−t) − 1/(z−λ),
//! q = −1/4 + C₀/z + C_t/(z−t) + μ/(z−λ),
//!
//! where A₁₂(z) = k(z−λ)/(z(z−t)). This requires det A₀ = det A_t = 0, so
//! that θ_i = Tr A_i and q has no double poles.

use super::system::SystemSpec;
use crate::blocks::ThetaTriple;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Coefficient data of the scalar equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarReduction {
    pub t: C64,
    pub k: C64,
    pub lambda: C64,
    pub mu: C64,
    pub c0: C64,
    pub ct: C64,
    pub theta0: C64,
    pub thetat: C64,
}

impl ScalarReduction {
    /// Residues of p(z) at 0, t and λ.
    pub fn p_residues(&self) -> [C64; 3] {
        [1.0 - self.theta0, 1.0 - self.thetat, C64::new(-1.0, 0.0)]
    }

    pub fn q_constant(&self) -> C64 {
        C64::new(-0.25, 0.0)
    }

    pub fn p(&self, z: C64) -> C64 {
        let r = self.p_residues();
        r[0] / z + r[1] / (z - self.t) + r[2] / (z - self.lambda)
    }

    pub fn q(&self, z: C64) -> C64 {
        self.q_constant() + self.c0 / z + self.ct / (z - self.t) + self.mu / (z - self.lambda)
    }

    pub fn theta(&self, thetainf: C64) -> ThetaTriple {
        ThetaTriple::new(self.theta0, self.thetat, thetainf)
    }
}

/// q(z) evaluated directly from the matrix entries.
pub fn q_direct(sys: &SystemSpec, lambda: C64, z: C64) -> C64 {
    let (a0, at, t) = (sys.a0.a, sys.at.a, sys.t);
    let a11 = 0.5 + a0[0][0] / z + at[0][0] / (z - t);
    let a22 = -0.5 + a0[1][1] / z + at[1][1] / (z - t);
    let a12 = a0[0][1] / z + at[0][1] / (z - t);
    let a21 = a0[1][0] / z + at[1][0] / (z - t);
    let da11 = -a0[0][0] / (z * z) - at[0][0] / ((z - t) * (z - t));
    a11 * a22 - a12 * a21 - da11 + a11 * (1.0 / (z - lambda) - 1.0 / z - 1.0 / (z - t))
}

pub fn reduce_to_scalar(sys: &SystemSpec) -> Result<ScalarReduction> {
    let (a0, at, t) = (sys.a0.a, sys.at.a, sys.t);
    let scale = 1.0 + sys.a0.max_abs() + sys.at.max_abs();
    let k = a0[0][1] + at[0][1];
    if k.norm() < 1e-14 * scale {
        return Err(Error::Degenerate("A₁₂ vanishes identically".into()));
    }
    let lambda = a0[0][1] * t / k;
    let sep = 1e-10 * t.norm();
    if lambda.norm() < sep || (lambda - t).norm() < sep {
        return Err(Error::Degenerate(format!(
            "apparent singularity λ = {lambda} collides with a pole"
        )));
    }
    let mu = 0.5 + a0[0][0] / lambda + at[0][0] / (lambda - t);
    let residue = |ap: &[[C64; 2]; 2], ar: &[[C64; 2]; 2], p: C64, r: C64| -> C64 {
        let (al_p, de_p, b_p, c_p) = (ap[0][0], ap[1][1], ap[0][1], ap[1][0]);
        let (al_r, de_r, b_r, c_r) = (ar[0][0], ar[1][1], ar[0][1], ar[1][0]);
        let pr = p - r;
        al_p * (-0.5 + de_r / pr) + de_p * (0.5 + al_r / pr) - (b_p * c_r + c_p * b_r) / pr
            + al_p * (1.0 / (p - lambda) - 1.0 / pr)
            - 0.5
            - al_r / pr
    };
    let zero = C64::new(0.0, 0.0);
    Ok(ScalarReduction {
        t,
        k,
        lambda,
        mu,
        c0: residue(&a0, &at, zero, t),
        ct: residue(&at, &a0, t, zero),
        theta0: sys.a0.trace(),
        thetat: sys.at.trace(),
    })
}

/// |μ² − [(θ₀−1)/λ + (θ_t−1)/(λ−t)] μ + C₀/λ + C_t/(λ−t) − 1/4|.
pub fn apparent_singularity_residual(data: &ScalarReduction, theta: &ThetaTriple) -> f64 {
    let (l, m, t) = (data.lambda, data.mu, data.t);
    let lhs = m * m - ((theta.theta0 - 1.0) / l + (theta.thetat - 1.0) / (l - t)) * m
        + data.c0 / l
        + data.ct / (l - t);
    (lhs - 0.25).norm()
}

/// Both expressions for the Painlevé V variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvY {
    /// (A₀)₁₁(A_t)₁₂ / ((A_t)₁₁(A₀)₁₂)
    pub from_entries: C64,
    /// (θ₀+θ_t−θ∞−(2μ−1)(λ−t)) / (θ₀+θ_t−θ∞−(2μ−1)λ)
    pub from_lambda_mu: C64,
}

impl PvY {
    pub fn difference(&self) -> f64 {
        (self.from_entries - self.from_lambda_mu).norm()
    }
}

pub fn pv_y(sys: &SystemSpec, thetainf: C64) -> Result<PvY> {
    let den = sys.at.a[0][0] * sys.a0.a[0][1];
    let scale = 1.0 + sys.a0.max_abs() * sys.at.max_abs();
    if den.norm() < 1e-14 * scale {
        return Err(Error::Degenerate(
            "(A_t)₁₁ (A₀)₁₂ vanishes, y is undefined".into(),
        ));
    }
    let from_entries = sys.a0.a[0][0] * sys.at.a[0][1] / den;
    let r = reduce_to_scalar(sys)?;
    let s = r.theta0 + r.thetat - thetainf;
    let w = 2.0 * r.mu - 1.0;
    let d2 = s - w * r.lambda;
    if d2.norm() < 1e-14 * (1.0 + s.norm()) {
        return Err(Error::Degenerate(
            "λ, μ form of y has a vanishing denominator".into(),
        ));
    }
    Ok(PvY {
        from_entries,
        from_lambda_mu: (s - w * (r.lambda - r.t)) / d2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsia::matrix::Matrix2C;
    use crate::fuchsia::ode::OdeOptions;
    use crate::fuchsia::schlesinger::flow_to;
    use crate::fuchsia::system::system_from_rabi;
    use crate::rabi::RabiParams;

    fn flowed(g: f64, d: f64, e: f64) -> SystemSpec {
        let sys = system_from_rabi(&RabiParams::new(g, d, e));
        flow_to(&sys, sys.t * C64::new(1.0, 1.0), &OdeOptions::default()).unwrap()
    }

    #[test]
    fn printed_rabi_point_is_degenerate() {
        let sys = system_from_rabi(&RabiParams::new(0.25, 0.6, 0.37));
        assert!(matches!(reduce_to_scalar(&sys), Err(Error::Degenerate(_))));
        assert!(pv_y(&sys, C64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn residues_match_direct_q() {
        let sys = flowed(0.25, 0.6, 0.37);
        let r = reduce_to_scalar(&sys).unwrap();
        for z in [
            C64::new(0.37, 0.21),
            C64::new(-0.1, -0.4),
            C64::new(2.0, 0.5),
        ] {
            let d = q_direct(&sys, r.lambda, z) - r.q(z);
            assert!(d.norm() < 1e-11, "{d}");
        }
        assert_eq!(r.p_residues()[2], C64::new(-1.0, 0.0));
        assert!((r.p_residues()[0] - (1.0 - sys.a0.trace())).norm() < 1e-10);
    }

    #[test]
    fn apparent_relation_after_flow() {
        let sys = flowed(0.25, 0.6, 0.37);
        let r = reduce_to_scalar(&sys).unwrap();
        assert!(apparent_singularity_residual(&r, &r.theta(C64::new(0.0, 0.0))) < 1e-10);
    }

    #[test]
    fn gauge_invariance() {
        let sys = flowed(0.2, 0.45, -0.3);
        let d = Matrix2C::diag(C64::new(1.7, 0.3), C64::new(0.4, -0.2));
        let conj = sys.conjugate_by(&d).unwrap();
        let a = reduce_to_scalar(&sys).unwrap();
        let b = reduce_to_scalar(&conj).unwrap();
        let ra = apparent_singularity_residual(&a, &a.theta(C64::new(0.0, 0.0)));
        let rb = apparent_singularity_residual(&b, &b.theta(C64::new(0.0, 0.0)));
        assert!(ra < 1e-10 && rb < 1e-10);
        assert!((a.lambda - b.lambda).norm() < 1e-12);
        assert!((a.mu - b.mu).norm() < 1e-12);
    }

    #[test]
    fn y_forms_agree() {
        let sys = flowed(0.3, 0.7, 0.8);
        let y = pv_y(&sys, C64::new(0.0, 0.0)).unwrap();
        assert!(y.difference() < 1e-10, "{y:?}");
    }
}
