//! Two-qubit basis conventions, operator bases and control operators.
//!
//! Computational ordering is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` with qubit 1 as the slow
//! index and `↑` the `σ_z = +1` eigenstate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, CMat, C64, I, ONE, ZERO};

/// Tolerance for exact-arithmetic identities between operators whose entries
/// are 0, ±1, ±½ or ±i.
pub const EXACT_TOL: f64 = 1e-14;

pub const SYS_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const XYZ: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMat {
        let d = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        CMat::from_row_major(d.to_vec()).expect("2x2")
    }
}

/// `σ` acting on qubit `site` (0-based, slow index first) of an `n`-qubit register.
pub fn pauli_on(p: Pauli, site: usize, n: usize) -> CMat {
    assert!(site < n);
    (0..n).fold(CMat::identity(1), |acc, k| {
        let f = if k == site { p.matrix() } else { Pauli::I.matrix() };
        kron(&acc, &f)
    })
}

/// Labelled orthonormal two-qubit states `|0⟩..|3⟩`, each stored as
/// computational-basis amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisConvention {
    name: String,
    states: [[C64; 4]; 4],
}

fn unit(idx: usize) -> [C64; 4] {
    let mut v = [ZERO; 4];
    v[idx] = ONE;
    v
}

impl BasisConvention {
    /// `|0⟩=|↑↑⟩, |1⟩=|↓↓⟩, |2⟩=|↑↓⟩, |3⟩=|↓↑⟩`
    pub fn standard() -> Self {
        Self::from_indices("default", [0, 3, 1, 2])
    }

    /// `|0⟩=|↑↑⟩, |1⟩=|↑↓⟩, |2⟩=|↓↑⟩, |3⟩=|↓↓⟩`, under which Z1..Z4 are
    /// single-qubit operators.
    pub fn local() -> Self {
        Self::from_indices("local", [0, 1, 2, 3])
    }

    /// The standard convention with the two spectator labels exchanged.
    pub fn standard_swapped() -> Self {
        Self::from_indices("default-swapped", [0, 3, 2, 1])
    }

    /// Maps label `k` to computational index `indices[k]`.
    pub fn from_indices(name: &str, indices: [usize; 4]) -> Self {
        let mut sorted = indices;
        sorted.sort_unstable();
        assert_eq!(sorted, [0, 1, 2, 3], "labels must permute the computational basis");
        Self { name: name.to_string(), states: indices.map(unit) }
    }

    /// Builds a convention from an arbitrary orthonormal pair `|0′⟩, |1′⟩`.
    /// Labels 2 and 3 are completed by Gram–Schmidt over the computational
    /// states `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` taken in that order.
    pub fn from_pair(zero: [C64; 4], one: [C64; 4]) -> Result<Self> {
        let mut states: Vec<[C64; 4]> = Vec::with_capacity(4);
        for v in [zero, one] {
            let n = norm(&v);
            if (n - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidState(format!("basis vector has norm {n}")));
            }
            states.push(v);
        }
        if inner(&states[0], &states[1]).norm() > 1e-12 {
            return Err(Error::InvalidState("basis pair is not orthogonal".into()));
        }
        for idx in 0..4 {
            if states.len() == 4 {
                break;
            }
            let mut v = unit(idx);
            for s in &states {
                let ov = inner(s, &v);
                for k in 0..4 {
                    v[k] -= s[k] * ov;
                }
            }
            let n = norm(&v);
            if n > 1e-6 {
                states.push(v.map(|z| z / n));
            }
        }
        Ok(Self { name: "custom".into(), states: [states[0], states[1], states[2], states[3]] })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn state(&self, label: usize) -> &[C64; 4] {
        &self.states[label]
    }

    /// `|a⟩⟨b|` in computational coordinates.
    pub fn ketbra(&self, a: usize, b: usize) -> CMat {
        CMat::outer(&self.states[a], &self.states[b]).expect("4-vectors")
    }

    pub fn projector(&self, a: usize) -> CMat {
        self.ketbra(a, a)
    }
}

impl Default for BasisConvention {
    fn default() -> Self {
        Self::standard()
    }
}

fn inner(a: &[C64; 4], b: &[C64; 4]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64; 4]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Which basis convention to use, as named on the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    #[default]
    Default,
    Local,
}

impl BasisChoice {
    pub fn convention(self) -> BasisConvention {
        match self {
            BasisChoice::Default => BasisConvention::standard(),
            BasisChoice::Local => BasisConvention::local(),
        }
    }
}

impl FromStr for BasisChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "default" => Ok(BasisChoice::Default),
            "local" => Ok(BasisChoice::Local),
            other => Err(Error::Config(format!("unknown basis `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ControlName {
    X0,
    X1,
    Xphi,
    X01,
    Z1,
    Z2,
    Z3,
    Z4,
}

impl ControlName {
    pub const ALL: [ControlName; 8] = [
        ControlName::X0,
        ControlName::X1,
        ControlName::Xphi,
        ControlName::X01,
        ControlName::Z1,
        ControlName::Z2,
        ControlName::Z3,
        ControlName::Z4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ControlName::X0 => "X0",
            ControlName::X1 => "X1",
            ControlName::Xphi => "Xphi",
            ControlName::X01 => "X01",
            ControlName::Z1 => "Z1",
            ControlName::Z2 => "Z2",
            ControlName::Z3 => "Z3",
            ControlName::Z4 => "Z4",
        }
    }
}

impl fmt::Display for ControlName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ControlName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.trim().chars().filter(|c| !matches!(c, ',' | '_' | ' ')).collect();
        match key.to_ascii_lowercase().as_str() {
            "x0" => Ok(ControlName::X0),
            "x1" => Ok(ControlName::X1),
            "xphi" | "xφ" => Ok(ControlName::Xphi),
            "x01" => Ok(ControlName::X01),
            "z1" => Ok(ControlName::Z1),
            "z2" => Ok(ControlName::Z2),
            "z3" => Ok(ControlName::Z3),
            "z4" => Ok(ControlName::Z4),
            _ => Err(Error::UnknownControl(s.to_string())),
        }
    }
}

impl Serialize for ControlName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ControlName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses an outer-to-inner ordering such as `Xphi,X1,X0` or `Xphi-X1-X0`.
/// `none` is the empty ordering.
pub fn parse_ordering(s: &str) -> Result<Vec<ControlName>> {
    if s.trim().eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = if s.contains(',') { s.split(',').collect() } else { s.split('-').collect() };
    let names = parts
        .into_iter()
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    Ok(names)
}

pub fn ordering_label(ordering: &[ControlName]) -> String {
    if ordering.is_empty() {
        return "none".into();
    }
    ordering.iter().map(|c| c.as_str()).collect::<Vec<_>>().join("-")
}

/// A Hermitian involution on the two-qubit space.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlOperator {
    name: ControlName,
    sys: CMat,
}

impl ControlOperator {
    pub fn name(&self) -> ControlName {
        self.name
    }

    pub fn matrix(&self) -> &CMat {
        &self.sys
    }

    /// `X ⊗ I_bath` on the joint space.
    pub fn full_matrix(&self, n_bath_spins: usize) -> CMat {
        lift_to_full(&self.sys, n_bath_spins)
    }
}

pub fn build_control(name: ControlName, basis: &BasisConvention) -> ControlOperator {
    let id = CMat::identity(SYS_DIM);
    let p = |k| basis.projector(k);
    let two = C64::new(2.0, 0.0);
    let sys = match name {
        ControlName::X0 => &p(0).scale(two) - &id,
        ControlName::X1 => &p(1).scale(two) - &id,
        ControlName::Xphi => {
            let plus: Vec<C64> = (0..4).map(|i| basis.state(0)[i] + basis.state(1)[i]).collect();
            &CMat::outer(&plus, &plus).expect("4-vectors") - &id
        }
        ControlName::X01 | ControlName::Z1 => &(&p(0) + &p(1)).scale(two) - &id,
        ControlName::Z2 => &(&(&p(0) - &p(1)) + &p(2)) - &p(3),
        ControlName::Z3 => sum(&[basis.ketbra(0, 1), basis.ketbra(1, 0), basis.ketbra(2, 3), basis.ketbra(3, 2)]),
        ControlName::Z4 => sum(&[basis.ketbra(0, 2), basis.ketbra(2, 0), basis.ketbra(1, 3), basis.ketbra(3, 1)]),
    };
    ControlOperator { name, sys }
}

fn sum(ms: &[CMat]) -> CMat {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| &acc + m)
}

/// `op ⊗ I_{2^n_bath}`
pub fn lift_to_full(op: &CMat, n_bath_spins: usize) -> CMat {
    kron(op, &CMat::identity(1 << n_bath_spins))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Y,
    YTilde,
    R,
}

impl Family {
    pub fn prefix(self) -> &'static str {
        match self {
            Family::Y => "Y",
            Family::YTilde => "Ỹ",
            Family::R => "R",
        }
    }
}

/// Sixteen indexed two-qubit operators, labelled 1..=16.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    family: Family,
    elements: Vec<CMat>,
}

impl OperatorBasis {
    pub fn family(&self) -> Family {
        self.family
    }

    /// 1-based, as in the usual labelling `Y₁..Y₁₆`.
    pub fn get(&self, label: usize) -> &CMat {
        &self.elements[label - 1]
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn iter_labeled(&self) -> impl Iterator<Item = (usize, &CMat)> {
        self.elements.iter().enumerate().map(|(i, m)| (i + 1, m))
    }
}

pub fn build_basis(family: Family, basis: &BasisConvention) -> OperatorBasis {
    let kb = |a, b| basis.ketbra(a, b);
    let elements = match family {
        Family::R => Pauli::ALL
            .iter()
            .flat_map(|&k| Pauli::ALL.iter().map(move |&l| kron(&k.matrix(), &l.matrix())))
            .collect(),
        Family::Y | Family::YTilde => {
            let shared_head = vec![
                CMat::identity(SYS_DIM),
                &kb(0, 0) + &kb(1, 1),
                &kb(2, 2) - &kb(3, 3),
                kb(2, 3),
                kb(3, 2),
                &kb(0, 0) - &kb(1, 1),
            ];
            let middle: Vec<CMat> = if family == Family::Y {
                vec![kb(1, 2), kb(2, 1), kb(1, 3), kb(3, 1), kb(0, 2), kb(2, 0), kb(0, 3), kb(3, 0)]
            } else {
                vec![
                    &kb(0, 2) - &kb(1, 2),
                    &kb(2, 0) - &kb(2, 1),
                    &kb(0, 3) - &kb(1, 3),
                    &kb(3, 0) - &kb(3, 1),
                    &kb(0, 2) + &kb(1, 2),
                    &kb(2, 0) + &kb(2, 1),
                    &kb(0, 3) + &kb(1, 3),
                    &kb(3, 0) + &kb(3, 1),
                ]
            };
            let tail = vec![&kb(0, 1) + &kb(1, 0), (&kb(1, 0) - &kb(0, 1)).scale(-I)];
            shared_head.into_iter().chain(middle).chain(tail).collect()
        }
    };
    OperatorBasis { family, elements }
}

/// Two-qubit state amplitudes in computational order.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemState {
    amplitudes: [C64; 4],
}

impl SystemState {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("norm² = {n2}")));
        }
        Ok(Self { amplitudes })
    }

    /// `α|0⟩ + β|1⟩` under the given convention.
    pub fn superposition(alpha: C64, beta: C64, basis: &BasisConvention) -> Result<Self> {
        let mut amps = [ZERO; 4];
        for (k, a) in amps.iter_mut().enumerate() {
            *a = alpha * basis.state(0)[k] + beta * basis.state(1)[k];
        }
        Self::new(amps)
    }

    pub fn label(label: usize, basis: &BasisConvention) -> Self {
        Self { amplitudes: *basis.state(label) }
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amplitudes
    }

    pub fn density(&self) -> CMat {
        CMat::outer(&self.amplitudes, &self.amplitudes).expect("4-vectors")
    }
}
