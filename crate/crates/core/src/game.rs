//! XOR games and general correlation functionals.
//!
//! A two-player XOR game with question distribution `q` and predicate
//! `f(x,y) = a⊕b` is fully described by its game matrix
//! `Φ_xy = q(x,y)·(−1)^{f(x,y)}`. Raw (unnormalized) coefficient matrices are
//! first-class here because the named inequalities of the catalog are stated
//! as inequalities, not games. Classical bounds are computed by exhaustive
//! enumeration, which serves as the trusted oracle for everything downstream.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RMat;

/// Default guard on `nA + nB` for deterministic-strategy enumeration.
pub const DEFAULT_ENUM_GUARD: usize = 24;

/// Default guard on `d^nA · d^nB` for d-outcome enumeration.
pub const DEFAULT_ENUM_GUARD_D: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Rows derived from (q, f); Σ|Φ_xy| = 1.
    Game,
    /// Arbitrary real coefficients.
    Raw,
}

/// Question distribution and predicate a game matrix was derived from.
#[derive(Debug, Clone)]
pub struct GameSource {
    pub q: RMat,
    pub f: RMat,
}

/// A two-player correlation functional (XOR game matrix or raw inequality).
#[derive(Debug, Clone)]
pub struct BellFunctional {
    pub name: String,
    pub phi: RMat,
    pub normalization: Normalization,
    pub source: Option<GameSource>,
}

impl BellFunctional {
    /// Raw functional from a coefficient matrix.
    pub fn from_phi(name: &str, phi: RMat) -> Result<Self> {
        if phi.nrows() == 0 || phi.ncols() == 0 {
            return Err(Error::InvalidInput("Φ must be at least 1×1".into()));
        }
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("Φ has non-finite entries".into()));
        }
        Ok(Self {
            name: name.to_string(),
            phi,
            normalization: Normalization::Raw,
            source: None,
        })
    }

    pub fn num_alice(&self) -> usize {
        self.phi.nrows()
    }

    pub fn num_bob(&self) -> usize {
        self.phi.ncols()
    }

    /// Sum of |Φ_xy|; equals 1 for game-normalized functionals.
    pub fn weight(&self) -> f64 {
        self.phi.iter().map(|v| v.abs()).sum()
    }

    /// View this functional as a game: q = |Φ|/Σ|Φ|, f = [Φ < 0]. For
    /// game-normalized functionals this returns the original (q, f).
    pub fn as_game(&self) -> (RMat, RMat) {
        if let Some(src) = &self.source {
            return (src.q.clone(), src.f.clone());
        }
        let w = self.weight();
        let q = self.phi.map(|v| if w > 0.0 { v.abs() / w } else { 0.0 });
        let f = self.phi.map(|v| if v < 0.0 { 1.0 } else { 0.0 });
        (q, f)
    }

    /// Scale factor between raw bias and game-normalized bias.
    pub fn game_scale(&self) -> f64 {
        match self.normalization {
            Normalization::Game => 1.0,
            Normalization::Raw => self.weight(),
        }
    }
}

/// Builds the game matrix Φ_xy = q(x,y)·(−1)^{f(x,y)} from a question
/// distribution and a binary predicate.
pub fn functional_from_game(name: &str, q: &RMat, f: &RMat) -> Result<BellFunctional> {
    if q.shape() != f.shape() {
        return Err(Error::ShapeMismatch(format!(
            "q is {:?} but f is {:?}",
            q.shape(),
            f.shape()
        )));
    }
    if q.nrows() == 0 || q.ncols() == 0 {
        return Err(Error::InvalidInput(
            "game must have at least one question per player".into(),
        ));
    }
    if q.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidInput("q has negative or non-finite entries".into()));
    }
    let total: f64 = q.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "q sums to {total}, expected 1 within 1e-12"
        )));
    }
    if f.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::InvalidInput("f entries must be 0 or 1".into()));
    }
    let phi = RMat::from_fn(q.nrows(), q.ncols(), |x, y| {
        q[(x, y)] * if f[(x, y)] == 0.0 { 1.0 } else { -1.0 }
    });
    Ok(BellFunctional {
        name: name.to_string(),
        phi,
        normalization: Normalization::Game,
        source: Some(GameSource { q: q.clone(), f: f.clone() }),
    })
}

/// Maximal value of Σ Φ_xy a(x) b(y) over deterministic sign assignments.
///
/// Only Alice's side is enumerated; for fixed a the optimal Bob response is
/// b(y) = sign(Σ_x Φ_xy a(x)) in closed form, so the result is identical to
/// enumerating both sides.
pub fn classical_bias(fun: &BellFunctional) -> Result<f64> {
    classical_bias_guarded(fun, DEFAULT_ENUM_GUARD)
}

pub fn classical_bias_guarded(fun: &BellFunctional, guard: usize) -> Result<f64> {
    let (na, nb) = (fun.num_alice(), fun.num_bob());
    if na + nb > guard {
        return Err(Error::GuardExceeded(format!(
            "nA + nB = {} exceeds enumeration guard {}",
            na + nb,
            guard
        )));
    }
    // enumerate the smaller side
    let phi = if na <= nb { fun.phi.clone() } else { fun.phi.transpose() };
    let (rows, cols) = (phi.nrows(), phi.ncols());
    let mut best = f64::NEG_INFINITY;
    for mask in 0u64..(1u64 << rows) {
        let mut val = 0.0;
        for y in 0..cols {
            let mut col = 0.0;
            for x in 0..rows {
                let sign = if (mask >> x) & 1 == 1 { 1.0 } else { -1.0 };
                col += sign * phi[(x, y)];
            }
            val += col.abs();
        }
        if val > best {
            best = val;
        }
    }
    Ok(best)
}

/// A d-outcome two-player functional evaluated on deterministic strategies.
pub trait DOutcomeGame {
    fn num_inputs(&self) -> (usize, usize);
    fn outcomes(&self) -> usize;
    /// Value achieved by the deterministic maps x ↦ f[x], y ↦ g[y].
    fn deterministic_value(&self, f: &[usize], g: &[usize]) -> f64;
}

/// Exhaustive maximum of a d-outcome functional over deterministic maps
/// X → {0..d−1}, Y → {0..d−1}.
pub fn classical_score_d(game: &dyn DOutcomeGame, d: usize) -> Result<f64> {
    classical_score_d_guarded(game, d, DEFAULT_ENUM_GUARD_D)
}

pub fn classical_score_d_guarded(game: &dyn DOutcomeGame, d: usize, guard: u128) -> Result<f64> {
    let (na, nb) = game.num_inputs();
    if d != game.outcomes() {
        return Err(Error::InvalidInput(format!(
            "outcome count mismatch: requested {d}, game has {}",
            game.outcomes()
        )));
    }
    let count = (d as u128)
        .checked_pow(na as u32)
        .and_then(|a| a.checked_mul((d as u128).pow(nb as u32)));
    match count {
        Some(c) if c <= guard => {}
        _ => {
            return Err(Error::GuardExceeded(format!(
                "d^nA · d^nB exceeds enumeration guard {guard}"
            )))
        }
    }
    let mut f = vec![0usize; na];
    let mut best = f64::NEG_INFINITY;
    loop {
        let mut g = vec![0usize; nb];
        loop {
            let v = game.deterministic_value(&f, &g);
            if v > best {
                best = v;
            }
            if !increment(&mut g, d) {
                break;
            }
        }
        if !increment(&mut f, d) {
            break;
        }
    }
    Ok(best)
}

fn increment(digits: &mut [usize], base: usize) -> bool {
    for v in digits.iter_mut() {
        *v += 1;
        if *v < base {
            return true;
        }
        *v = 0;
    }
    false
}

/// ω = (1 + ξ)/2.
pub fn bias_to_winprob(xi: f64) -> f64 {
    (1.0 + xi) / 2.0
}

/// Parameters of the three-angle correlation inequality family.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MnxParams {
    pub mu: f64,
    pub nu: f64,
    pub chi: f64,
}

impl MnxParams {
    pub fn new(mu: f64, nu: f64, chi: f64) -> Self {
        Self { mu, nu, chi }
    }

    /// The family admits a quantum violation exactly when this product is
    /// negative.
    pub fn violation_product(&self) -> f64 {
        let Self { mu, nu, chi } = *self;
        (mu + chi).cos() * (mu + nu).cos() * nu.cos() * chi.cos()
    }

    pub fn is_violating(&self) -> bool {
        self.violation_product() < 0.0
    }
}

/// 2×2 functional of the three-angle family, read off the Bell operator
/// coefficients (A-index row, B-index column).
pub fn mnx_functional(p: MnxParams) -> BellFunctional {
    let MnxParams { mu, nu, chi } = p;
    let phi = RMat::from_row_slice(
        2,
        2,
        &[
            (mu + nu).cos() * (mu + chi).cos() * chi.cos(),
            -nu.cos() * chi.cos() * (mu + chi).cos(),
            -(mu + nu).cos() * (mu + chi).cos() * nu.cos(),
            nu.cos() * chi.cos() * (mu + nu).cos(),
        ],
    );
    BellFunctional {
        name: format!("mnx(mu={:.6},nu={:.6},chi={:.6})", mu, nu, chi),
        phi,
        normalization: Normalization::Raw,
        source: None,
    }
}

/// Quantum bound of the three-angle family, |sin μ · sin(χ−ν) · sin(μ+ν+χ)|.
///
/// The absolute-value branch is used: the quantum bias of a real correlation
/// functional is nonnegative under output relabeling. Matches the SDP value
/// whenever the violation condition holds.
pub fn mnx_quantum_bound(p: MnxParams) -> f64 {
    (p.mu.sin() * (p.chi - p.nu).sin() * (p.mu + p.nu + p.chi).sin()).abs()
}

/// The CHSH game: uniform questions, predicate x·y.
pub fn chsh() -> BellFunctional {
    let q = RMat::from_element(2, 2, 0.25);
    let f = RMat::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
    let mut g = functional_from_game("chsh", &q, &f).expect("static game");
    g.name = "chsh".into();
    g
}

/// The 4×3 elegant inequality with unit weights.
pub fn elegant() -> BellFunctional {
    let phi = RMat::from_row_slice(
        4,
        3,
        &[
            1.0, 1.0, 1.0, //
            1.0, -1.0, -1.0, //
            -1.0, 1.0, -1.0, //
            -1.0, -1.0, 1.0,
        ],
    );
    BellFunctional::from_phi("elegant", phi).expect("static functional")
}

/// The elegant inequality as a game (q uniform over 4×3, f from signs).
pub fn elegant_game() -> BellFunctional {
    let raw = elegant();
    let (q, f) = raw.as_game();
    let mut g = functional_from_game("elegant-game", &q, &f).expect("static game");
    g.name = "elegant-game".into();
    g
}

// ---------------------------------------------------------------------------
// Game files
// ---------------------------------------------------------------------------

/// On-disk game description.
///
/// `kind = "xor"` requires (q, f); `kind = "functional"` requires phi;
/// `kind = "satwap"` requires d.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameFile {
    pub name: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

/// A parsed game file: either an XOR/correlation functional or a d-outcome
/// family selector.
#[derive(Debug, Clone)]
pub enum LoadedGame {
    Functional(BellFunctional),
    Satwap { name: String, d: usize },
}

fn rows_to_mat(rows: &[Vec<f64>]) -> Result<RMat> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::GameFile("empty matrix".into()));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::GameFile("ragged matrix rows".into()));
    }
    Ok(RMat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

impl GameFile {
    pub fn parse(text: &str) -> Result<LoadedGame> {
        let file: GameFile =
            serde_json::from_str(text).map_err(|e| Error::GameFile(e.to_string()))?;
        file.load()
    }

    pub fn load(&self) -> Result<LoadedGame> {
        match self.kind.as_str() {
            "xor" => {
                if self.phi.is_some() {
                    return Err(Error::GameFile("kind \"xor\" takes (q, f), not phi".into()));
                }
                let q = self.q.as_ref().ok_or_else(|| Error::GameFile("missing q".into()))?;
                let f = self.f.as_ref().ok_or_else(|| Error::GameFile("missing f".into()))?;
                let fun = functional_from_game(&self.name, &rows_to_mat(q)?, &rows_to_mat(f)?)?;
                Ok(LoadedGame::Functional(fun))
            }
            "functional" => {
                if self.q.is_some() || self.f.is_some() {
                    return Err(Error::GameFile(
                        "kind \"functional\" takes phi, not (q, f)".into(),
                    ));
                }
                let phi = self
                    .phi
                    .as_ref()
                    .ok_or_else(|| Error::GameFile("missing phi".into()))?;
                Ok(LoadedGame::Functional(BellFunctional::from_phi(
                    &self.name,
                    rows_to_mat(phi)?,
                )?))
            }
            "satwap" => {
                let d = self.d.ok_or_else(|| Error::GameFile("missing d".into()))?;
                if d < 2 {
                    return Err(Error::GameFile("satwap needs d ≥ 2".into()));
                }
                Ok(LoadedGame::Satwap { name: self.name.clone(), d })
            }
            other => Err(Error::GameFile(format!("unknown kind {other:?}"))),
        }
    }
}
