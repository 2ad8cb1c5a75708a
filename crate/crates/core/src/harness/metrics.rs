use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::UnitaryMatrix;

/// Reconstruction quality `1 − ‖C − U‖_F / (2‖U‖_F)`. Global phase counts.
pub fn similarity(target: &UnitaryMatrix, model: &UnitaryMatrix) -> Result<f64> {
    let diff = model.frobenius_distance(target)?;
    let scale = 2.0 * target.frobenius_norm();
    // Rounding can push an exactly antipodal pair a hair below zero.
    Ok((1.0 - diff / scale).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseAligned {
    pub similarity: f64,
    /// The global phase `φ` applied to the model, `e^{iφ}·C`.
    pub phase: f64,
    /// `tr(U†C)` vanished, so no phase is preferred and the raw value is returned.
    pub degenerate: bool,
}

/// [`similarity`] maximized over a global phase on the model. The optimum is
/// `φ* = −arg tr(U†C)`.
pub fn phase_aligned_similarity(target: &UnitaryMatrix, model: &UnitaryMatrix) -> Result<PhaseAligned> {
    let overlap = target.hs_inner(model)?;
    if overlap.norm() <= 1e-12 * target.dim() as f64 {
        return Ok(PhaseAligned { similarity: similarity(target, model)?, phase: 0.0, degenerate: true });
    }
    let phase = -overlap.arg();
    let rotated = model.scale(Complex64::from_polar(1.0, phase));
    Ok(PhaseAligned { similarity: similarity(target, &rotated)?, phase, degenerate: false })
}

/// Ratio of a strategy's similarity to the random baseline's.
pub fn improvement(al_similarity: f64, rand_similarity: f64) -> Result<f64> {
    if rand_similarity <= 1e-12 {
        return Err(Error::UndefinedRatio(rand_similarity));
    }
    Ok(al_similarity / rand_similarity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{generate_target, TargetSpec};
    use crate::qcore::assemble_unitary;

    fn random_unitary(seed: u64) -> UnitaryMatrix {
        assemble_unitary(generate_target(&TargetSpec { n_qubits: 2, depth: 5, seed }).unwrap().circuit()).unwrap()
    }

    #[test]
    fn similarity_extremes() {
        let u = random_unitary(1);
        assert!((similarity(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        let neg = u.scale(Complex64::new(-1.0, 0.0));
        assert!(similarity(&u, &neg).unwrap().abs() < 1e-15);
    }

    #[test]
    fn similarity_matches_elementwise_frobenius() {
        let (u, c) = (random_unitary(2), random_unitary(3));
        let mut diff2 = 0.0;
        let mut norm2 = 0.0;
        for r in 0..4 {
            for k in 0..4 {
                diff2 += (c.get(r, k) - u.get(r, k)).norm_sqr();
                norm2 += u.get(r, k).norm_sqr();
            }
        }
        let expect = 1.0 - diff2.sqrt() / (2.0 * norm2.sqrt());
        assert!((similarity(&u, &c).unwrap() - expect).abs() < 1e-14);
        assert!(similarity(&u, &UnitaryMatrix::identity(3)).is_err());
    }

    #[test]
    fn phase_aligned_recovers_global_phase() {
        let u = random_unitary(4);
        for phi in [-2.5, 0.3, 1.9, std::f64::consts::PI] {
            let c = u.scale(Complex64::from_polar(1.0, phi));
            let aligned = phase_aligned_similarity(&u, &c).unwrap();
            assert!((aligned.similarity - 1.0).abs() < 1e-12);
            assert!(!aligned.degenerate);
        }
    }

    #[test]
    fn phase_aligned_matches_grid_search() {
        for seed in 5..10 {
            let (u, c) = (random_unitary(seed), random_unitary(seed + 100));
            let aligned = phase_aligned_similarity(&u, &c).unwrap();
            let raw = similarity(&u, &c).unwrap();
            assert!(aligned.similarity >= raw - 1e-15);
            // A 360-point grid gets within ~(π/360)² relative error of the
            // optimum; refine around the best grid point to reach 1e-6.
            let eval = |phi: f64| similarity(&u, &c.scale(Complex64::from_polar(1.0, phi))).unwrap();
            let step = std::f64::consts::TAU / 360.0;
            let (mut best_phi, mut best) = (0.0, f64::MIN);
            for k in 0..360 {
                let phi = k as f64 * step;
                let s = eval(phi);
                if s > best {
                    best = s;
                    best_phi = phi;
                }
            }
            for k in -1000..=1000 {
                best = best.max(eval(best_phi + k as f64 * step / 1000.0));
            }
            assert!((aligned.similarity - best).abs() < 1e-6, "{} vs {best}", aligned.similarity);
        }
    }

    #[test]
    fn orthogonal_trace_is_degenerate() {
        // tr(Z) = 0: identity target against Z model.
        let u = UnitaryMatrix::identity(1);
        let z = UnitaryMatrix::from_rows(1, vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ])
        .unwrap();
        let aligned = phase_aligned_similarity(&u, &z).unwrap();
        assert!(aligned.degenerate);
        assert_eq!(aligned.similarity, similarity(&u, &z).unwrap());
    }

    #[test]
    fn improvement_ratio() {
        assert_eq!(improvement(0.7, 0.7).unwrap(), 1.0);
        assert!((improvement(0.9, 0.45).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(improvement(0.5, 0.0), Err(Error::UndefinedRatio(_))));
    }
}
