use super::matrix::Matrix2C;
use super::ode::OdeOptions;
use super::schlesinger::flow_to;
use super::system::SystemSpec;
use crate::error::Result;
use crate::tau::TauSeries;
use num_complex::Complex64 as C64;

/// H = −½ Tr σ₃A_t − (1/t) Tr A₀A_t.
pub fn hamiltonian(sys: &SystemSpec) -> C64 {
    -(Matrix2C::sigma3() * sys.at).trace() * 0.5 - (sys.a0 * sys.at).trace() / sys.t
}

/// dH/dt = Tr(A₀A_t)/t² along the flow.
pub fn hamiltonian_derivative(sys: &SystemSpec) -> C64 {
    (sys.a0 * sys.at).trace() / (sys.t * sys.t)
}

/// Flows `sys` through `ts` in order and returns max |H(t) − d log τ/dt|.
pub fn hamiltonian_check(
    sys: &SystemSpec,
    series: &TauSeries,
    ts: &[C64],
    opts: &OdeOptions,
) -> Result<f64> {
    let mut cur = *sys;
    let mut worst: f64 = 0.0;
    for &t in ts {
        cur = flow_to(&cur, t, opts)?;
        let d = hamiltonian(&cur) - series.dlog_tau(t, 1)?;
        worst = worst.max(d.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsia::system::system_from_rabi;
    use crate::rabi::RabiParams;

    #[test]
    fn initial_values() {
        let (g, d, e) = (0.2, 0.4, 0.3);
        let sys = system_from_rabi(&RabiParams::new(g, d, e));
        let th = e + g * g;
        let h = hamiltonian(&sys);
        assert!((h - (th / 2.0 + d * d / (4.0 * g * g))).norm() < 1e-13);
        let hp = hamiltonian_derivative(&sys);
        assert!((hp - d * d / (16.0 * g.powi(4))).norm() < 1e-11);
    }

    #[test]
    fn decoupled_value() {
        let sys = system_from_rabi(&RabiParams::new(0.3, 0.0, 0.5));
        assert_eq!((sys.a0 * sys.at).trace(), C64::new(0.0, 0.0));
        assert!((hamiltonian(&sys) - (0.5 + 0.09) / 2.0).norm() < 1e-15);
    }

    #[test]
    fn derivative_matches_flow() {
        let sys = system_from_rabi(&RabiParams::new(0.25, 0.5, 0.1));
        let opts = OdeOptions::default();
        let h = 1e-4;
        let a = hamiltonian(&flow_to(&sys, sys.t + h, &opts).unwrap());
        let b = hamiltonian(&flow_to(&sys, sys.t - h, &opts).unwrap());
        let fd = (a - b) / (2.0 * h);
        assert!((fd - hamiltonian_derivative(&sys)).norm() < 1e-6 * fd.norm());
    }
}
