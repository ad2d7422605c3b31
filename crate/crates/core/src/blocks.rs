//! Irregular conformal block coefficients B_{λ,μ} and the truncated block
//! series ℬ(θ, σ; t) = e^{−θ_t t} Σ B_{λ,μ} t^{|λ|+|μ|}.

use crate::error::{Error, Result};
use crate::partitions::{pairs_by_level, Partition};
use num_complex::Complex64 as C64;
use std::sync::{Arc, Mutex, OnceLock};

/// Local exponents (θ₀, θ_t, θ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaTriple {
    pub theta0: C64,
    pub thetat: C64,
    pub thetainf: C64,
}

impl ThetaTriple {
    pub fn new(theta0: C64, thetat: C64, thetainf: C64) -> Self {
        Self {
            theta0,
            thetat,
            thetainf,
        }
    }

    pub fn real(theta0: f64, thetat: f64, thetainf: f64) -> Self {
        Self::new(theta0.into(), thetat.into(), thetainf.into())
    }
}

/// Cap L on |λ| + |μ|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockTruncation {
    pub max_level: usize,
}

impl BlockTruncation {
    pub fn new(max_level: usize) -> Self {
        Self { max_level }
    }
}

impl Default for BlockTruncation {
    fn default() -> Self {
        Self { max_level: 10 }
    }
}

/// Which box-denominator convention to use.
///
/// `Nekrasov` squares the denominators and flips the sign of 2σ on μ-boxes,
/// which makes the coefficients invariant under σ → −σ, λ ↔ μ. This is the
/// form whose tau function satisfies the Hamiltonian flow, and the default.
///
/// `Linear` keeps single powers of `λ'_j+μ_i−i−j+1+2σ` on both sides, as the
/// formula is usually typeset. It is kept for comparison and is not used by
/// the spectral solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockForm {
    #[default]
    Nekrasov,
    Linear,
}

/// Default resonance tolerance for a given σ.
pub fn singular_tol(sigma: C64) -> f64 {
    1e-12 * (1.0 + (2.0 * sigma).norm())
}

#[derive(Debug, Clone, Copy)]
struct BoxData {
    content: f64,
    hook_sq: f64,
    shift: f64,
}

#[derive(Debug, Clone, Default)]
struct PairBoxes {
    lam: Vec<BoxData>,
    mu: Vec<BoxData>,
}

fn pair_boxes(lam: &Partition, mu: &Partition) -> PairBoxes {
    let collect = |a: &Partition, b: &Partition| -> Vec<BoxData> {
        a.boxes()
            .map(|(i, j)| {
                let h = (a.row(i) + a.col(j) + 1 - i - j) as f64;
                BoxData {
                    content: i as f64 - j as f64,
                    hook_sq: h * h,
                    shift: (a.col(j) + b.row(i)) as f64 - (i + j) as f64 + 1.0,
                }
            })
            .collect()
    };
    PairBoxes {
        lam: collect(lam, mu),
        mu: collect(mu, lam),
    }
}

fn box_product(
    form: BlockForm,
    theta: &ThetaTriple,
    sigma: C64,
    boxes: &PairBoxes,
    tol: f64,
) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for (side, list) in [(1.0, &boxes.lam), (-1.0, &boxes.mu)] {
        let s = sigma * side;
        for b in list.iter() {
            let tt = theta.thetat + s + b.content;
            let num = (theta.thetainf + s + b.content) * (tt * tt - theta.theta0 * theta.theta0);
            let den = match form {
                BlockForm::Nekrasov => b.shift + 2.0 * s,
                BlockForm::Linear => b.shift + 2.0 * sigma,
            };
            if den.norm() < tol {
                return Err(Error::Resonant(format!(
                    "block denominator {den} vanishes at sigma = {sigma}"
                )));
            }
            let den = match form {
                BlockForm::Nekrasov => b.hook_sq * den * den,
                BlockForm::Linear => b.hook_sq * den,
            };
            acc *= num / den;
        }
    }
    Ok(acc)
}

/// B_{λ,μ}(θ, σ).
pub fn block_coeff(
    form: BlockForm,
    theta: &ThetaTriple,
    sigma: C64,
    lam: &Partition,
    mu: &Partition,
) -> Result<C64> {
    block_coeff_with_tol(form, theta, sigma, lam, mu, singular_tol(sigma))
}

pub fn block_coeff_with_tol(
    form: BlockForm,
    theta: &ThetaTriple,
    sigma: C64,
    lam: &Partition,
    mu: &Partition,
    tol: f64,
) -> Result<C64> {
    box_product(form, theta, sigma, &pair_boxes(lam, mu), tol)
}

struct PairTable {
    levels: Vec<Vec<PairBoxes>>,
}

fn pair_table(max_level: usize) -> Arc<PairTable> {
    static CACHE: OnceLock<Mutex<Option<Arc<PairTable>>>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref() {
        if t.levels.len() > max_level {
            return t.clone();
        }
    }
    let levels = pairs_by_level(max_level)
        .into_iter()
        .map(|pairs| pairs.iter().map(|(l, m)| pair_boxes(l, m)).collect())
        .collect();
    let table = Arc::new(PairTable { levels });
    *guard = Some(table.clone());
    table
}

/// c_k = Σ_{|λ|+|μ|=k} B_{λ,μ} for k = 0..=L.
pub fn level_sums(
    form: BlockForm,
    theta: &ThetaTriple,
    sigma: C64,
    trunc: BlockTruncation,
) -> Result<Vec<C64>> {
    let table = pair_table(trunc.max_level);
    let tol = singular_tol(sigma);
    table.levels[..=trunc.max_level]
        .iter()
        .map(|level| {
            level.iter().try_fold(C64::new(0.0, 0.0), |acc, boxes| {
                Ok(acc + box_product(form, theta, sigma, boxes, tol)?)
            })
        })
        .collect()
}

/// ℬ(θ, σ; t) truncated at |λ| + |μ| ≤ L.
pub fn block_series(
    form: BlockForm,
    theta: &ThetaTriple,
    sigma: C64,
    t: C64,
    trunc: BlockTruncation,
) -> Result<C64> {
    let c = level_sums(form, theta, sigma, trunc)?;
    Ok((-theta.thetat * t).exp() * horner(&c, t))
}

pub(crate) fn horner(c: &[C64], t: C64) -> C64 {
    c.iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &x| acc * t + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partitions_of;

    fn p(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn linear_hand_values() {
        let th = ThetaTriple::real(1.0, 1.0, 0.0);
        let e = Partition::empty();
        let a = block_coeff(BlockForm::Linear, &th, c(3.0), &p(&[1]), &e).unwrap();
        let b = block_coeff(BlockForm::Linear, &th, c(3.0), &e, &p(&[1])).unwrap();
        assert_eq!(a, c(7.5));
        assert_eq!(b, c(-1.5));
    }

    #[test]
    fn nekrasov_hand_values() {
        // 3·15/6² and (−3)·3/(−6)²
        let th = ThetaTriple::real(1.0, 1.0, 0.0);
        let e = Partition::empty();
        let a = block_coeff(BlockForm::Nekrasov, &th, c(3.0), &p(&[1]), &e).unwrap();
        let b = block_coeff(BlockForm::Nekrasov, &th, c(3.0), &e, &p(&[1])).unwrap();
        assert!((a - c(1.25)).norm() < 1e-15);
        assert!((b - c(-0.25)).norm() < 1e-15);
    }

    #[test]
    fn empty_pair_is_one() {
        let th = ThetaTriple::real(0.3, -0.7, 0.2);
        let e = Partition::empty();
        for form in [BlockForm::Nekrasov, BlockForm::Linear] {
            assert_eq!(block_coeff(form, &th, c(0.37), &e, &e).unwrap(), c(1.0));
        }
    }

    #[test]
    fn linear_level_one_series() {
        let th = ThetaTriple::real(1.0, 1.0, 0.0);
        let v = block_series(
            BlockForm::Linear,
            &th,
            c(3.0),
            c(0.1),
            BlockTruncation::new(1),
        )
        .unwrap();
        let want = (-0.1f64).exp() * 1.6;
        assert!((v - c(want)).norm() < 1e-15);
    }

    #[test]
    fn series_at_zero_is_one() {
        let th = ThetaTriple::real(0.8, 0.8, 0.0);
        for l in [0, 3, 8] {
            let v = block_series(
                BlockForm::Nekrasov,
                &th,
                c(2.2),
                c(0.0),
                BlockTruncation::new(l),
            )
            .unwrap();
            assert_eq!(v, c(1.0));
        }
    }

    #[test]
    fn level_sums_match_pairwise() {
        let th = ThetaTriple::new(C64::new(0.4, 0.1), c(0.4), c(0.0));
        let sigma = C64::new(0.31, -0.05);
        let sums = level_sums(BlockForm::Nekrasov, &th, sigma, BlockTruncation::new(5)).unwrap();
        for (k, s) in sums.iter().enumerate() {
            let mut direct = c(0.0);
            for a in 0..=k {
                for l in partitions_of(a) {
                    for m in partitions_of(k - a) {
                        direct += block_coeff(BlockForm::Nekrasov, &th, sigma, &l, &m).unwrap();
                    }
                }
            }
            assert!((direct - s).norm() <= 1e-13 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn truncation_consistency() {
        let th = ThetaTriple::real(0.8, 0.8, 0.0);
        let t = c(-0.16);
        let sigma = c(2.2);
        let sums = level_sums(BlockForm::Nekrasov, &th, sigma, BlockTruncation::new(8)).unwrap();
        let v6 = block_series(BlockForm::Nekrasov, &th, sigma, t, BlockTruncation::new(6)).unwrap();
        let v8 = block_series(BlockForm::Nekrasov, &th, sigma, t, BlockTruncation::new(8)).unwrap();
        let pref = (-th.thetat * t).exp().norm();
        let bound = pref * (sums[7].norm() * t.norm().powi(7) + sums[8].norm() * t.norm().powi(8));
        assert!((v6 - v8).norm() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn resonance_detected() {
        let th = ThetaTriple::real(0.3, 0.3, 0.0);
        // λ = {1}: shift 0, so the denominator 2σ vanishes at σ = 0
        let r = block_coeff(
            BlockForm::Nekrasov,
            &th,
            c(0.0),
            &p(&[1]),
            &Partition::empty(),
        );
        assert!(matches!(r, Err(Error::Resonant(_))));
    }
}
