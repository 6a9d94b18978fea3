//! Random spin-bath Hamiltonians and initial states.
//!
//! Spins are numbered from 0; spins 0 and 1 form the two-qubit system and
//! occupy the slow tensor indices, the remaining `n − 2` spins form the bath.
//!
//! All randomness comes from `ChaCha20Rng::seed_from_u64`, whose output stream
//! is fixed across platforms and `rand_chacha` 0.3 releases. Coefficients are
//! drawn as `U[0,1) − 0.5` in the order
//! `b[m][γ]` (m ascending, γ = x,y,z) then `c[m][n][γ][δ]` (m < n ascending,
//! γ, δ = x,y,z).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, CMat, HermEig, C64, ZERO};
use crate::operators::{pauli_on, BasisConvention, Pauli, SystemState, SYS_DIM};

pub const COEFF_BOUND: f64 = 0.5;
pub const DEFAULT_SPINS: usize = 5;

/// System-bath Hamiltonian with every one- and two-spin Pauli term present,
/// plus its cached eigendecomposition.
#[derive(Clone, Debug)]
pub struct SpinBathModel {
    n_spins: usize,
    seed: u64,
    b: Vec<[f64; 3]>,
    c: Vec<Vec<[[f64; 3]; 3]>>,
    h_full: CMat,
    eig: HermEig,
}

/// JSON form of a model's coefficients, for exact replay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub n_spins: usize,
    pub seed: u64,
    /// `b[m][γ]`
    pub b: Vec<Vec<f64>>,
    /// `c[m][n][γ][δ]`, zero unless `m < n`.
    pub c: Vec<Vec<Vec<Vec<f64>>>>,
}

impl SpinBathModel {
    /// Draws all coefficients from `seed`.
    pub fn random(n_spins: usize, seed: u64) -> Result<Self> {
        check_spins(n_spins)?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut draw = || rng.gen::<f64>() - 0.5;
        let b: Vec<[f64; 3]> = (0..n_spins).map(|_| [draw(), draw(), draw()]).collect();
        let mut c = vec![vec![[[0.0; 3]; 3]; n_spins]; n_spins];
        for m in 0..n_spins {
            for n in m + 1..n_spins {
                for g in 0..3 {
                    for d in 0..3 {
                        c[m][n][g][d] = draw();
                    }
                }
            }
        }
        Self::from_coefficients(n_spins, seed, b, c)
    }

    /// `c` is indexed `c[m][n]` over all pairs; only `m < n` entries are used
    /// and the rest must be zero.
    pub fn from_coefficients(n_spins: usize, seed: u64, b: Vec<[f64; 3]>, c: Vec<Vec<[[f64; 3]; 3]>>) -> Result<Self> {
        check_spins(n_spins)?;
        if b.len() != n_spins || c.len() != n_spins || c.iter().any(|row| row.len() != n_spins) {
            return Err(Error::InvalidModel("coefficient arrays do not match n_spins".into()));
        }
        let in_range = |x: f64| x.is_finite() && x.abs() <= COEFF_BOUND;
        if !b.iter().flatten().all(|&x| in_range(x)) {
            return Err(Error::InvalidModel("single-spin coefficient outside [-0.5, 0.5]".into()));
        }
        for m in 0..n_spins {
            for n in 0..n_spins {
                let block = c[m][n].iter().flatten();
                if n <= m {
                    if block.clone().any(|&x| x != 0.0) {
                        return Err(Error::InvalidModel(format!("coupling c[{m}][{n}] must be zero")));
                    }
                } else if !block.clone().all(|&x| in_range(x)) {
                    return Err(Error::InvalidModel("coupling coefficient outside [-0.5, 0.5]".into()));
                }
            }
        }
        let h_full = assemble(n_spins, &b, &c);
        let eig = herm_eig(&h_full)?;
        Ok(Self { n_spins, seed, b, c, h_full, eig })
    }

    pub fn zero(n_spins: usize) -> Result<Self> {
        Self::from_coefficients(n_spins, 0, vec![[0.0; 3]; n_spins], vec![vec![[[0.0; 3]; 3]; n_spins]; n_spins])
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn n_bath_spins(&self) -> usize {
        self.n_spins - 2
    }

    pub fn bath_dim(&self) -> usize {
        1 << self.n_bath_spins()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn single(&self) -> &[[f64; 3]] {
        &self.b
    }

    pub fn couplings(&self) -> &[Vec<[[f64; 3]; 3]>] {
        &self.c
    }

    pub fn hamiltonian(&self) -> &CMat {
        &self.h_full
    }

    pub fn eig(&self) -> &HermEig {
        &self.eig
    }

    /// Sum of all coefficient magnitudes; an upper bound on `‖H‖`.
    pub fn coefficient_l1(&self) -> f64 {
        let b: f64 = self.b.iter().flatten().map(|x| x.abs()).sum();
        let c: f64 = self.c.iter().flatten().flatten().flatten().map(|x| x.abs()).sum();
        b + c
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            n_spins: self.n_spins,
            seed: self.seed,
            b: self.b.iter().map(|r| r.to_vec()).collect(),
            c: self.c.iter().map(|row| row.iter().map(|blk| blk.iter().map(|r| r.to_vec()).collect()).collect()).collect(),
        }
    }

    pub fn from_document(doc: &ModelDocument) -> Result<Self> {
        let bad = || Error::InvalidModel("malformed coefficient arrays".into());
        let b = doc.b.iter().map(|r| <[f64; 3]>::try_from(r.as_slice()).map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        let mut c = Vec::with_capacity(doc.c.len());
        for row in &doc.c {
            let mut out_row = Vec::with_capacity(row.len());
            for blk in row {
                if blk.len() != 3 {
                    return Err(bad());
                }
                let mut arr = [[0.0; 3]; 3];
                for (g, r) in blk.iter().enumerate() {
                    arr[g] = <[f64; 3]>::try_from(r.as_slice()).map_err(|_| bad())?;
                }
                out_row.push(arr);
            }
            c.push(out_row);
        }
        Self::from_coefficients(doc.n_spins, doc.seed, b, c)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }
}

fn check_spins(n: usize) -> Result<()> {
    if !(3..=10).contains(&n) {
        return Err(Error::InvalidModel(format!("n_spins = {n}, expected 3..=10")));
    }
    Ok(())
}

fn assemble(n: usize, b: &[[f64; 3]], c: &[Vec<[[f64; 3]; 3]>]) -> CMat {
    let sig: Vec<Vec<CMat>> = (0..n).map(|m| Pauli::XYZ.iter().map(|&p| pauli_on(p, m, n)).collect()).collect();
    let mut h = CMat::zeros(1 << n);
    for m in 0..n {
        for g in 0..3 {
            if b[m][g] != 0.0 {
                h = &h + &sig[m][g].scale(C64::new(b[m][g], 0.0));
            }
        }
        for k in m + 1..n {
            for g in 0..3 {
                for d in 0..3 {
                    let coef = c[m][k][g][d];
                    if coef != 0.0 {
                        h = &h + &(&sig[m][g] * &sig[k][d]).scale(C64::new(coef, 0.0));
                    }
                }
            }
        }
    }
    h
}

/// Joint system-bath state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    amplitudes: Vec<C64>,
}

impl JointState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("joint state norm² = {n2}")));
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_raw(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    /// `sys ⊗ bath`; `bath` must be normalized.
    pub fn product(sys: &SystemState, bath: &[C64]) -> Result<Self> {
        let mut amps = Vec::with_capacity(SYS_DIM * bath.len());
        for &s in sys.amplitudes() {
            amps.extend(bath.iter().map(|&b| s * b));
        }
        Self::new(amps)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Haar-random unit vector: normalized i.i.d. complex Gaussians.
pub fn haar_vector(dim: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// `sys ⊗ |bath⟩` with a Haar-random pure bath state drawn from `bath_seed`.
pub fn initial_joint_state(sys: &SystemState, n_bath_spins: usize, bath_seed: u64) -> Result<JointState> {
    JointState::product(sys, &haar_vector(1 << n_bath_spins, bath_seed))
}

/// `α|0⟩ + β|1⟩` with `(α, β)` Haar-distributed on the unit sphere of ℂ².
pub fn random_protected_state(seed: u64, basis: &BasisConvention) -> SystemState {
    let v = haar_vector(2, seed);
    SystemState::superposition(v[0], v[1], basis).expect("normalized by construction")
}

/// Haar-random state on the full two-qubit space.
pub fn random_haar_state(seed: u64) -> SystemState {
    let v = haar_vector(SYS_DIM, seed);
    SystemState::new([v[0], v[1], v[2], v[3]]).expect("normalized by construction")
}

/// Computational basis state of the bath.
pub fn bath_basis_state(n_bath_spins: usize, index: usize) -> Vec<C64> {
    let mut v = vec![ZERO; 1 << n_bath_spins];
    v[index] = C64::new(1.0, 0.0);
    v
}
