//! The XOR-game semidefinite program and its diagonal dual.
//!
//! Primal: max Tr[Q̃ Φ̃] over unit-diagonal PSD Q̃, with
//! Φ̃ = ½ [[0, Φ], [Φᵀ, 0]]. The dual minimizes Tr[Λ]/2 over diagonal Λ with
//! Λ/2 − Φ̃ ⪰ 0. Solved by alternating-direction splitting with exact PSD
//! projection (full symmetric eigendecomposition) and a diagonal-constraint
//! projection; the dual vector is recovered from the PSD-cone multiplier and
//! then inflated uniformly so the returned Λ is feasible exactly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::BellFunctional;
use crate::linalg::{min_eig_symmetric, RMat, RVec};

/// Hard cap on nA + nB.
pub const MAX_SDP_SIZE: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200_000;

/// Primal/dual solution of the XOR-game SDP.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// Unit-diagonal PSD Gram matrix of size nA + nB.
    pub qtilde: RMat,
    /// Diagonal of the dual certificate Λ (nonnegative, length nA + nB).
    pub lambda: RVec,
    /// Tr[Q̃ Φ̃] — the quantum bias.
    pub primal_value: f64,
    /// Tr[Λ]/2.
    pub dual_value: f64,
    /// dual_value − primal_value.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SdpSolution {
    pub fn lambda_alice<'a>(&'a self, fun: &BellFunctional) -> impl Iterator<Item = f64> + 'a {
        self.lambda.iter().copied().take(fun.num_alice())
    }

    pub fn lambda_bob<'a>(&'a self, fun: &BellFunctional) -> impl Iterator<Item = f64> + 'a {
        self.lambda.iter().copied().skip(fun.num_alice())
    }
}

/// Φ̃ = ½ [[0, Φ], [Φᵀ, 0]].
pub fn phi_tilde(fun: &BellFunctional) -> RMat {
    let (na, nb) = (fun.num_alice(), fun.num_bob());
    let n = na + nb;
    let mut m = RMat::zeros(n, n);
    for x in 0..na {
        for y in 0..nb {
            m[(x, na + y)] = fun.phi[(x, y)] / 2.0;
            m[(na + y, x)] = fun.phi[(x, y)] / 2.0;
        }
    }
    m
}

fn psd_project(m: &RMat) -> RMat {
    let sym = (m + m.transpose()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut out = RMat::zeros(n, n);
    for i in 0..n {
        let w = eig.eigenvalues[i];
        if w > 0.0 {
            let v = eig.eigenvectors.column(i);
            out += (v * v.transpose()).scale(w);
        }
    }
    out
}

/// Recovers the dual diagonal from the scaled ADMM multiplier and inflates it
/// uniformly so Λ/2 − Φ̃ ⪰ 0 holds exactly.
fn polish_dual(u: &RMat, rho: f64, pt: &RMat) -> RVec {
    let n = pt.nrows();
    let s = (u + u.transpose()).scale(-0.5 * rho);
    let mut y = RVec::from_iterator(n, (0..n).map(|i| s[(i, i)] + pt[(i, i)]));
    let m = RMat::from_diagonal(&y) - pt;
    let wmin = min_eig_symmetric(&m);
    if wmin < 0.0 {
        y.add_scalar_mut(-wmin + f64::EPSILON);
    }
    y
}

/// Solves the XOR-game SDP to duality gap ≤ tol.
///
/// Returns `Error::NonConvergence` if the gap does not close within the
/// iteration budget; the error carries the best gap seen.
pub fn solve_xor_sdp(fun: &BellFunctional, tol: f64) -> Result<SdpSolution> {
    let (na, nb) = (fun.num_alice(), fun.num_bob());
    let n = na + nb;
    if n > MAX_SDP_SIZE {
        return Err(Error::GuardExceeded(format!(
            "nA + nB = {n} exceeds SDP size cap {MAX_SDP_SIZE}"
        )));
    }
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(Error::InvalidInput(format!(
            "tol {tol:e} outside [1e-12, 1e-3]"
        )));
    }
    let pt = phi_tilde(fun);
    let pnorm = pt.norm();
    if pnorm == 0.0 {
        // degenerate zero functional: Q = 1 is optimal, Λ = 0 feasible
        return Ok(SdpSolution {
            qtilde: RMat::identity(n, n),
            lambda: RVec::zeros(n),
            primal_value: 0.0,
            dual_value: 0.0,
            gap: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let mut rho = (pnorm / n as f64).max(1e-3);
    let alpha = 1.6; // over-relaxation
    let mut q = RMat::identity(n, n);
    let mut z = RMat::identity(n, n);
    let mut u = RMat::zeros(n, n);

    let mut best: Option<SdpSolution> = None;
    let mut iterations = 0;

    for it in 1..=MAX_ITERATIONS {
        iterations = it;
        // q-update: unconstrained minimum, then diagonal pinned to 1
        q = &z - &u + pt.scale(1.0 / rho);
        for i in 0..n {
            q[(i, i)] = 1.0;
        }
        let q_relaxed = q.scale(alpha) + z.scale(1.0 - alpha);
        let z_old = z.clone();
        z = psd_project(&(&q_relaxed + &u));
        u += q_relaxed - &z;

        if it % 25 == 0 || it == MAX_ITERATIONS {
            let y = polish_dual(&u, rho, &pt);
            let primal = z.dot(&pt);
            let dual = y.sum();
            let gap = dual - primal;
            let primal_residual = (&q - &z).norm();
            let candidate = SdpSolution {
                qtilde: z.clone(),
                lambda: y.scale(2.0),
                primal_value: primal,
                dual_value: dual,
                gap,
                iterations: it,
                converged: gap.abs() <= tol && primal_residual <= f64::min(1e-9, tol * 10.0),
            };
            if candidate.converged {
                return Ok(candidate);
            }
            if best
                .as_ref()
                .map(|b| gap.abs() < b.gap.abs())
                .unwrap_or(true)
            {
                best = Some(candidate);
            }
            // adaptive penalty
            let dual_residual = rho * (&z - &z_old).norm();
            if primal_residual > 10.0 * dual_residual {
                rho *= 2.0;
                u.scale_mut(0.5);
            } else if dual_residual > 10.0 * primal_residual {
                rho *= 0.5;
                u.scale_mut(2.0);
            }
        }
    }

    let best = best.expect("at least one candidate recorded");
    Err(Error::NonConvergence {
        iterations,
        gap: best.gap,
    })
}

/// Minimum eigenvalue of Λ/2 − Φ̃; the dual vector is feasible iff this is
/// ≥ −tolerance.
pub fn dual_feasibility_defect(lambda: &RVec, fun: &BellFunctional) -> f64 {
    let pt = phi_tilde(fun);
    let m = RMat::from_diagonal(&lambda.scale(0.5)) - pt;
    min_eig_symmetric(&m)
}

/// |Tr[Q̃ (Λ/2 − Φ̃)]| — complementary slackness residual.
pub fn slackness_residual(sol: &SdpSolution, fun: &BellFunctional) -> f64 {
    let pt = phi_tilde(fun);
    let m = RMat::from_diagonal(&sol.lambda.scale(0.5)) - pt;
    sol.qtilde.dot(&m).abs()
}

/// Stochastic lower bound on the quantum bias: alternating ascent over unit
/// vectors a_x, b_y maximizing Σ Φ_xy ⟨a_x, b_y⟩, with random restarts.
///
/// Each block update is the exact maximizer for the other block held fixed
/// (projection of the weighted sum onto the unit sphere), so the objective is
/// nondecreasing. For dim ≥ nA + nB the global optimum equals the SDP value.
pub fn vector_strategy_oracle(
    fun: &BellFunctional,
    dim: usize,
    restarts: usize,
    seed: u64,
) -> f64 {
    let (na, nb) = (fun.num_alice(), fun.num_bob());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..restarts.max(1) {
        let mut a: Vec<RVec> = (0..na).map(|_| random_unit(&mut rng, dim)).collect();
        let mut b: Vec<RVec> = (0..nb).map(|_| random_unit(&mut rng, dim)).collect();
        let mut last = objective(fun, &a, &b);
        for _ in 0..10_000 {
            for (x, ax) in a.iter_mut().enumerate() {
                let mut s = RVec::zeros(dim);
                for (y, by) in b.iter().enumerate() {
                    s += by.scale(fun.phi[(x, y)]);
                }
                let norm = s.norm();
                if norm > 1e-300 {
                    *ax = s.unscale(norm);
                }
            }
            for (y, by) in b.iter_mut().enumerate() {
                let mut s = RVec::zeros(dim);
                for (x, ax) in a.iter().enumerate() {
                    s += ax.scale(fun.phi[(x, y)]);
                }
                let norm = s.norm();
                if norm > 1e-300 {
                    *by = s.unscale(norm);
                }
            }
            let val = objective(fun, &a, &b);
            if val - last < 1e-13 {
                last = val;
                break;
            }
            last = val;
        }
        if last > best {
            best = last;
        }
    }
    best
}

fn objective(fun: &BellFunctional, a: &[RVec], b: &[RVec]) -> f64 {
    let mut s = 0.0;
    for (x, ax) in a.iter().enumerate() {
        for (y, by) in b.iter().enumerate() {
            s += fun.phi[(x, y)] * ax.dot(by);
        }
    }
    s
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> RVec {
    loop {
        let v = RVec::from_fn(dim, |_, _| {
            // Box-Muller
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        });
        let n = v.norm();
        if n > 1e-12 {
            return v.unscale(n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{chsh, classical_bias, elegant, BellFunctional};

    #[test]
    fn chsh_bias_and_dual() {
        let g = chsh();
        let sol = solve_xor_sdp(&g, 1e-10).unwrap();
        assert!(sol.converged);
        assert!((sol.primal_value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
        assert!(sol.gap.abs() <= 1e-10 + 1e-12);
        // all four dual entries are √2/4 under game normalization
        for v in sol.lambda.iter() {
            assert!((v - 2f64.sqrt() / 4.0).abs() < 1e-8, "lambda entry {v}");
        }
        assert!(dual_feasibility_defect(&sol.lambda, &g) >= -1e-12);
        assert!(slackness_residual(&sol, &g) <= sol.gap.abs() + 1e-8);
    }

    #[test]
    fn zero_functional_short_circuits() {
        let g = BellFunctional::from_phi("zero", RMat::zeros(2, 2)).unwrap();
        let sol = solve_xor_sdp(&g, 1e-9).unwrap();
        assert_eq!(sol.primal_value, 0.0);
        assert_eq!(sol.lambda.sum(), 0.0);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn elegant_bias() {
        let g = elegant();
        let sol = solve_xor_sdp(&g, 1e-9).unwrap();
        assert!((sol.primal_value - 4.0 * 3f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn infeasible_zero_dual_has_negative_defect() {
        let g = chsh();
        let lam = RVec::zeros(4);
        assert!(dual_feasibility_defect(&lam, &g) < -1e-3);
        // doubling the optimal dual keeps it strictly feasible
        let sol = solve_xor_sdp(&g, 1e-9).unwrap();
        assert!(dual_feasibility_defect(&sol.lambda.scale(2.0), &g) > 0.0);
    }

    #[test]
    fn slackness_all_slack_identity() {
        // Q = identity with the optimal dual: residual = Tr[Λ]/2 (Φ̃ has zero diagonal)
        let g = chsh();
        let sol = solve_xor_sdp(&g, 1e-9).unwrap();
        let mut id_sol = sol.clone();
        id_sol.qtilde = RMat::identity(4, 4);
        let r = slackness_residual(&id_sol, &g);
        assert!((r - sol.dual_value).abs() < 1e-8);
    }

    #[test]
    fn oracle_matches_sdp_on_chsh() {
        let g = chsh();
        let v = vector_strategy_oracle(&g, 4, 8, 7);
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-5);
    }

    #[test]
    fn oracle_dim1_is_classical() {
        let g = chsh();
        let v = vector_strategy_oracle(&g, 1, 32, 11);
        assert!((v - classical_bias(&g).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn scaling_property() {
        let g = chsh();
        let base = solve_xor_sdp(&g, 1e-10).unwrap();
        for c in [0.5, 2.0] {
            let scaled =
                BellFunctional::from_phi("scaled", g.phi.scale(c)).unwrap();
            let sol = solve_xor_sdp(&scaled, 1e-10).unwrap();
            assert!((sol.primal_value - c * base.primal_value).abs() < 1e-7);
            assert!((sol.dual_value - c * base.dual_value).abs() < 1e-7);
            for (a, b) in sol.lambda.iter().zip(base.lambda.iter()) {
                assert!((a - c * b).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn tol_range_enforced() {
        let g = chsh();
        assert!(solve_xor_sdp(&g, 1e-2).is_err());
        assert!(solve_xor_sdp(&g, 1e-13).is_err());
    }
}
