//! Complex state-vector simulation: states, binary and order-d observables,
//! Born-rule correlators, and the explicit optimal strategies of the catalog.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{BellFunctional, MnxParams};
use crate::linalg::{
    ceye, cr, hermitian_eigen, hermitize, lift_left, lift_right, mat_power, phi_plus,
    polar_unitary, unitary_defect, CMat, CVec,
};

/// A pure bipartite state with an explicit (dA, dB) split.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub amplitudes: CVec,
    pub dims: (usize, usize),
}

impl StateVector {
    pub fn new(amplitudes: CVec, dims: (usize, usize)) -> Result<Self> {
        if dims.0 * dims.1 != amplitudes.len() {
            return Err(Error::ShapeMismatch(format!(
                "state length {} does not match dims {}×{}",
                amplitudes.len(),
                dims.0,
                dims.1
            )));
        }
        if (amplitudes.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "state norm {} is not 1 within 1e-12",
                amplitudes.norm()
            )));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Maximally entangled state of local dimension d.
    pub fn maximally_entangled(d: usize) -> Self {
        Self {
            amplitudes: phi_plus(d),
            dims: (d, d),
        }
    }
}

/// Hermitian observable squaring to the identity.
#[derive(Debug, Clone)]
pub struct BinaryObservable {
    matrix: CMat,
}

impl BinaryObservable {
    pub fn new(matrix: CMat) -> Result<Self> {
        let herm = (&matrix - matrix.adjoint()).norm();
        if herm > 1e-12 {
            return Err(Error::NotBinary(format!("Hermiticity defect {herm:.3e}")));
        }
        let sq = (&matrix * &matrix - ceye(matrix.nrows())).norm();
        if sq > 1e-10 {
            return Err(Error::NotBinary(format!("square defect {sq:.3e}")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Projectors onto the ±1 eigenspaces: (𝟙 ± A)/2, index 0 ↦ outcome +1.
    pub fn projectors(&self) -> [CMat; 2] {
        let id = ceye(self.dim());
        [
            (&id + &self.matrix).scale(0.5),
            (&id - &self.matrix).scale(0.5),
        ]
    }
}

/// Unitary observable with d-th power equal to the identity.
#[derive(Debug, Clone)]
pub struct GeneralizedObservable {
    matrix: CMat,
    d: usize,
}

impl GeneralizedObservable {
    pub fn new(matrix: CMat, d: usize) -> Result<Self> {
        let u = unitary_defect(&matrix);
        if u > 1e-10 {
            return Err(Error::NotGeneralized {
                d,
                detail: format!("unitarity defect {u:.3e}"),
            });
        }
        let p = (mat_power(&matrix, d) - ceye(matrix.nrows())).norm();
        if p > 1e-8 {
            return Err(Error::NotGeneralized {
                d,
                detail: format!("d-th power defect {p:.3e}"),
            });
        }
        let adj = (matrix.adjoint() - mat_power(&matrix, d - 1)).norm();
        if adj > 1e-8 {
            return Err(Error::NotGeneralized {
                d,
                detail: format!("adjoint/inverse defect {adj:.3e}"),
            });
        }
        Ok(Self { matrix, d })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// k-th order observable A^{(k)} = A^k (k may exceed d; reduced mod d).
    pub fn power(&self, k: usize) -> CMat {
        mat_power(&self.matrix, k % self.d)
    }

    /// Spectral projectors P_a = (1/d) Σ_k ω^{−ak} A^k, exact for any valid
    /// generalized observable.
    pub fn projectors(&self) -> Vec<CMat> {
        let d = self.d;
        let n = self.dim();
        let mut projs = Vec::with_capacity(d);
        for a in 0..d {
            let mut p = CMat::zeros(n, n);
            for k in 0..d {
                let phase = crate::linalg::root_of_unity(d, -((a * k) as f64));
                p += self.power(k).scale(1.0 / d as f64) * phase;
            }
            projs.push(p);
        }
        projs
    }
}

/// One party's measurement observable, binary or order-d.
#[derive(Debug, Clone)]
pub enum Observable {
    Binary(BinaryObservable),
    Generalized(GeneralizedObservable),
}

impl Observable {
    pub fn matrix(&self) -> &CMat {
        match self {
            Observable::Binary(b) => b.matrix(),
            Observable::Generalized(g) => g.matrix(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix().nrows()
    }

    pub fn outcomes(&self) -> usize {
        match self {
            Observable::Binary(_) => 2,
            Observable::Generalized(g) => g.order(),
        }
    }

    /// Projectors indexed by outcome label a (binary: a ∈ {0,1} with
    /// (−1)^a eigenvalue; generalized: a ∈ {0..d−1} with ω^a eigenvalue).
    pub fn projectors(&self) -> Vec<CMat> {
        match self {
            Observable::Binary(b) => b.projectors().to_vec(),
            Observable::Generalized(g) => g.projectors(),
        }
    }
}

/// A shared state plus per-input observables for both players.
#[derive(Debug, Clone)]
pub struct QuantumStrategy {
    pub state: StateVector,
    pub alice: Vec<Observable>,
    pub bob: Vec<Observable>,
}

impl QuantumStrategy {
    pub fn validate(&self) -> Result<()> {
        let (da, db) = self.state.dims;
        for a in &self.alice {
            if a.dim() != da {
                return Err(Error::ShapeMismatch(format!(
                    "Alice observable dim {} vs state dA {}",
                    a.dim(),
                    da
                )));
            }
        }
        for b in &self.bob {
            if b.dim() != db {
                return Err(Error::ShapeMismatch(format!(
                    "Bob observable dim {} vs state dB {}",
                    b.dim(),
                    db
                )));
            }
        }
        Ok(())
    }
}

/// ⟨ψ| A_x ⊗ B_y |ψ⟩ for binary observables; the imaginary part is asserted
/// small and dropped.
pub fn correlator(s: &QuantumStrategy, x: usize, y: usize) -> Result<f64> {
    let a = s
        .alice
        .get(x)
        .ok_or_else(|| Error::InvalidInput(format!("Alice index {x} out of range")))?;
    let b = s
        .bob
        .get(y)
        .ok_or_else(|| Error::InvalidInput(format!("Bob index {y} out of range")))?;
    let (da, db) = s.state.dims;
    let op = lift_left(a.matrix(), db) * lift_right(b.matrix(), da);
    let val = expectation(&s.state.amplitudes, &op);
    if val.im.abs() > 1e-10 {
        return Err(Error::VerificationFailed(format!(
            "correlator has imaginary part {:.3e}",
            val.im
        )));
    }
    Ok(val.re)
}

pub fn expectation(state: &CVec, op: &CMat) -> Complex64 {
    (state.adjoint() * op * state)[(0, 0)]
}

/// Σ_xy Φ_xy · ⟨A_x ⊗ B_y⟩.
pub fn bias_of_strategy(fun: &BellFunctional, s: &QuantumStrategy) -> Result<f64> {
    if s.alice.len() != fun.num_alice() || s.bob.len() != fun.num_bob() {
        return Err(Error::ShapeMismatch(format!(
            "strategy has {}×{} observables, functional is {}×{}",
            s.alice.len(),
            s.bob.len(),
            fun.num_alice(),
            fun.num_bob()
        )));
    }
    let mut total = 0.0;
    for x in 0..fun.num_alice() {
        for y in 0..fun.num_bob() {
            total += fun.phi[(x, y)] * correlator(s, x, y)?;
        }
    }
    Ok(total)
}

/// Optimal Alice observables for a maximally entangled state, from Bob's.
///
/// On |φ⁺⟩ the one-sided action satisfies (M⊗𝟙)|φ⁺⟩ = (𝟙⊗Mᵀ)|φ⁺⟩, so the
/// stationarity condition λ_x|A_x⟩ = Σ_y Φ_xy|B_y⟩ pins A_x to the polar
/// unitary factor of Σ_y Φ_xy B_yᵀ, Hermitian-projected.
pub fn alice_from_bob(
    fun: &BellFunctional,
    bob: &[BinaryObservable],
    _lambda_a: &[f64],
) -> Result<Vec<BinaryObservable>> {
    if bob.len() != fun.num_bob() {
        return Err(Error::ShapeMismatch(format!(
            "{} Bob observables for a {}-column functional",
            bob.len(),
            fun.num_bob()
        )));
    }
    let dim = bob[0].dim();
    let mut alice = Vec::with_capacity(fun.num_alice());
    for x in 0..fun.num_alice() {
        let mut m = CMat::zeros(dim, dim);
        for (y, b) in bob.iter().enumerate() {
            m += b.matrix().transpose().scale(fun.phi[(x, y)]);
        }
        if m.norm() < 1e-12 {
            return Err(Error::Singular(format!(
                "Alice row {x} combination is numerically zero"
            )));
        }
        let u = polar_unitary(&m)?;
        let h = hermitize(&u);
        // the polar factor of a Hermitian-symmetrizable optimum is Hermitian
        // up to drift; re-polar after projection to restore unitarity
        let a = polar_unitary(&h)?;
        if (&a - &h).norm() > 1e-8 {
            return Err(Error::VerificationFailed(format!(
                "Alice row {x}: Hermitian projection drifted {:.3e}",
                (&a - &h).norm()
            )));
        }
        alice.push(BinaryObservable::new(a)?);
    }
    Ok(alice)
}

/// Optimal strategy of the three-angle family: maximally entangled qubits,
/// B₀ = σx, B₁ = cos μ σx + sin μ σz, Alice by best response.
pub fn mnx_optimal_strategy(p: MnxParams) -> Result<QuantumStrategy> {
    if !p.is_violating() {
        return Err(Error::InvalidInput(
            "parameters do not violate the classical bound (quantum bound degenerate)".into(),
        ));
    }
    let (sx, sz) = (crate::linalg::pauli_x(), crate::linalg::pauli_z());
    let b0 = BinaryObservable::new(sx.clone())?;
    let b1 = BinaryObservable::new(sx.scale(p.mu.cos()) + sz.scale(p.mu.sin()))?;
    strategy_from_bob(&crate::game::mnx_functional(p), vec![b0, b1])
}

/// Optimal elegant strategy: |φ⁺⟩, Bob = (σx, σy, σz), Alice by best response.
pub fn elegant_optimal_strategy() -> Result<QuantumStrategy> {
    let bob = vec![
        BinaryObservable::new(crate::linalg::pauli_x())?,
        BinaryObservable::new(crate::linalg::pauli_y())?,
        BinaryObservable::new(crate::linalg::pauli_z())?,
    ];
    strategy_from_bob(&crate::game::elegant(), bob)
}

/// Optimal CHSH strategy: |φ⁺⟩, Bob = (σx, σz), Alice = (σx ± σz)/√2.
pub fn chsh_optimal_strategy() -> Result<QuantumStrategy> {
    let bob = vec![
        BinaryObservable::new(crate::linalg::pauli_x())?,
        BinaryObservable::new(crate::linalg::pauli_z())?,
    ];
    strategy_from_bob(&crate::game::chsh(), bob)
}

fn strategy_from_bob(
    fun: &BellFunctional,
    bob: Vec<BinaryObservable>,
) -> Result<QuantumStrategy> {
    let alice = alice_from_bob(fun, &bob, &[])?;
    let s = QuantumStrategy {
        state: StateVector::maximally_entangled(bob[0].dim()),
        alice: alice.into_iter().map(Observable::Binary).collect(),
        bob: bob.into_iter().map(Observable::Binary).collect(),
    };
    s.validate()?;
    Ok(s)
}

/// Haar-ish random binary observable of the given dimension (random Hermitian
/// eigenbasis, random ±1 spectrum with both signs present when dim ≥ 2).
pub fn random_binary_observable(dim: usize, rng: &mut ChaCha8Rng) -> BinaryObservable {
    loop {
        let h = random_hermitian(dim, rng);
        let (_, vecs) = hermitian_eigen(&h);
        let signs: Vec<f64> = (0..dim)
            .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        if dim >= 2 && signs.iter().all(|&s| s == signs[0]) {
            continue; // ±𝟙 is a valid observable but useless in tests
        }
        let diag = CMat::from_diagonal(&CVec::from_iterator(dim, signs.iter().map(|&s| cr(s))));
        let m = &vecs * diag * vecs.adjoint();
        return BinaryObservable::new(hermitize(&m)).expect("constructed binary observable");
    }
}

/// Random order-d generalized observable (random eigenbasis, random root-of-
/// unity spectrum).
pub fn random_generalized_observable(
    dim: usize,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> GeneralizedObservable {
    let h = random_hermitian(dim, rng);
    let (_, vecs) = hermitian_eigen(&h);
    let phases = CVec::from_iterator(
        dim,
        (0..dim).map(|_| crate::linalg::root_of_unity(d, rng.gen_range(0..d) as f64)),
    );
    let m = &vecs * CMat::from_diagonal(&phases) * vecs.adjoint();
    GeneralizedObservable::new(m, d).expect("constructed generalized observable")
}

/// Random unit state of the given total dimension.
pub fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> CVec {
    loop {
        let v = CVec::from_fn(dim, |_, _| {
            Complex64::new(gaussian(rng), gaussian(rng))
        });
        let n = v.norm();
        if n > 1e-9 {
            return v.unscale(n);
        }
    }
}

pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    hermitize(&g)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{chsh, classical_bias, elegant, mnx_functional, mnx_quantum_bound};
    use crate::linalg::{pauli_x, pauli_y, pauli_z};

    #[test]
    fn sigma_z_correlator_on_00() {
        // |00⟩ with A = B = σz gives +1
        let mut amp = CVec::zeros(4);
        amp[0] = cr(1.0);
        let s = QuantumStrategy {
            state: StateVector::new(amp, (2, 2)).unwrap(),
            alice: vec![Observable::Binary(BinaryObservable::new(pauli_z()).unwrap())],
            bob: vec![Observable::Binary(BinaryObservable::new(pauli_z()).unwrap())],
        };
        assert!((correlator(&s, 0, 0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_axes_vanish_on_00() {
        let mut amp = CVec::zeros(4);
        amp[0] = cr(1.0);
        let s = QuantumStrategy {
            state: StateVector::new(amp, (2, 2)).unwrap(),
            alice: vec![Observable::Binary(BinaryObservable::new(pauli_z()).unwrap())],
            bob: vec![Observable::Binary(BinaryObservable::new(pauli_x()).unwrap())],
        };
        assert!(correlator(&s, 0, 0).unwrap().abs() < 1e-14);
        assert!(correlator(&s, 1, 0).is_err());
    }

    #[test]
    fn chsh_optimal_hits_tsirelson() {
        let s = chsh_optimal_strategy().unwrap();
        let b = bias_of_strategy(&chsh(), &s).unwrap();
        assert!((b - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        // all four correlators are ±1/√2
        for x in 0..2 {
            for y in 0..2 {
                let c = correlator(&s, x, y).unwrap();
                assert!((c.abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
            }
        }
        // Alice = (σx ± σz)/√2
        let expected = (pauli_x() + pauli_z()).scale(std::f64::consts::FRAC_1_SQRT_2);
        assert!((s.alice[0].matrix() - expected).norm() < 1e-10);
    }

    #[test]
    fn elegant_optimal_hits_4sqrt3() {
        let s = elegant_optimal_strategy().unwrap();
        let b = bias_of_strategy(&elegant(), &s).unwrap();
        assert!((b - 4.0 * 3f64.sqrt()).abs() < 1e-7);
        // Bob anticommutators vanish
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let bi = s.bob[i].matrix();
            let bj = s.bob[j].matrix();
            assert!((bi * bj + bj * bi).norm() < 1e-12);
        }
    }

    #[test]
    fn elegant_with_degenerate_bob_is_suboptimal() {
        // replacing σy by σx drops the value strictly below 4√3
        let bob = vec![
            BinaryObservable::new(pauli_x()).unwrap(),
            BinaryObservable::new(pauli_x()).unwrap(),
            BinaryObservable::new(pauli_z()).unwrap(),
        ];
        let s = strategy_from_bob(&elegant(), bob).unwrap();
        let b = bias_of_strategy(&elegant(), &s).unwrap();
        assert!(b < 4.0 * 3f64.sqrt() - 0.5);
    }

    #[test]
    fn mnx_strategy_achieves_bound() {
        let mut rng = seeded_rng(31);
        let mut found = 0;
        while found < 5 {
            let p = MnxParams::new(
                rng.gen_range(-3.1..3.1),
                rng.gen_range(-3.1..3.1),
                rng.gen_range(-3.1..3.1),
            );
            if p.violation_product() > -0.02 {
                continue;
            }
            found += 1;
            let s = mnx_optimal_strategy(p).unwrap();
            let b = bias_of_strategy(&mnx_functional(p), &s).unwrap();
            assert!(
                (b - mnx_quantum_bound(p)).abs() < 1e-6,
                "bias {b} vs bound {} at {:?}",
                mnx_quantum_bound(p),
                p
            );
            // Bob anticommutator on the state equals 2cos μ
            let b0 = s.bob[0].matrix();
            let b1 = s.bob[1].matrix();
            let anti = b0 * b1 + b1 * b0;
            assert!((anti - ceye(2).scale(2.0 * p.mu.cos())).norm() < 1e-10);
        }
        // ν = χ: degenerate
        assert!(mnx_optimal_strategy(MnxParams::new(0.7, 0.4, 0.4)).is_err());
    }

    #[test]
    fn single_term_row_gives_transposed_bob() {
        let fun = BellFunctional::from_phi(
            "single",
            crate::linalg::RMat::from_row_slice(1, 1, &[1.0]),
        )
        .unwrap();
        let bob = vec![BinaryObservable::new(pauli_y()).unwrap()];
        let alice = alice_from_bob(&fun, &bob, &[]).unwrap();
        assert!((alice[0].matrix() - pauli_y().transpose()).norm() < 1e-12);
    }

    use crate::game::BellFunctional;

    #[test]
    fn product_state_is_local() {
        // any strategy on |00⟩ stays below the classical bias of CHSH
        let mut amp = CVec::zeros(4);
        amp[0] = cr(1.0);
        let g = chsh();
        let mut rng = seeded_rng(5);
        for _ in 0..20 {
            let s = QuantumStrategy {
                state: StateVector::new(amp.clone(), (2, 2)).unwrap(),
                alice: (0..2)
                    .map(|_| Observable::Binary(random_binary_observable(2, &mut rng)))
                    .collect(),
                bob: (0..2)
                    .map(|_| Observable::Binary(random_binary_observable(2, &mut rng)))
                    .collect(),
            };
            let b = bias_of_strategy(&g, &s).unwrap();
            assert!(b <= classical_bias(&g).unwrap() + 1e-10);
        }
    }

    #[test]
    fn alice_from_bob_squares_to_identity() {
        let g = elegant();
        let bob = vec![
            BinaryObservable::new(pauli_x()).unwrap(),
            BinaryObservable::new(pauli_y()).unwrap(),
            BinaryObservable::new(pauli_z()).unwrap(),
        ];
        for a in alice_from_bob(&g, &bob, &[]).unwrap() {
            let m = a.matrix();
            assert!((m * m - ceye(2)).norm() < 1e-8);
        }
    }

    #[test]
    fn generalized_observable_checks() {
        let om = crate::linalg::root_of_unity(3, 1.0);
        let z3 = CMat::from_diagonal(&CVec::from_vec(vec![cr(1.0), om, om * om]));
        let g = GeneralizedObservable::new(z3, 3).unwrap();
        // projector reconstruction: Σ_a ω^a P_a = A
        let projs = g.projectors();
        let mut rec = CMat::zeros(3, 3);
        for (a, p) in projs.iter().enumerate() {
            // idempotent
            assert!((p * p - p).norm() < 1e-12);
            rec += p * crate::linalg::root_of_unity(3, a as f64);
        }
        assert!((rec - g.matrix()).norm() < 1e-12);
        // a non-root spectrum is rejected
        let bad = CMat::from_diagonal(&CVec::from_vec(vec![
            cr(1.0),
            Complex64::new(0.0, 1.0),
            om,
        ]));
        assert!(GeneralizedObservable::new(bad, 3).is_err());
    }

    #[test]
    fn rejects_bad_state() {
        let amp = CVec::from_vec(vec![cr(1.0), cr(1.0)]);
        assert!(StateVector::new(amp, (1, 2)).is_err());
        let amp = CVec::from_vec(vec![cr(1.0)]);
        assert!(StateVector::new(amp, (2, 2)).is_err());
    }
}
