//! Operator-subspace analysis of nested decoupling layers.
//!
//! A layer with control `X` acting on an effective Hamiltonian whose generating
//! span is `S` is useful when
//!
//! 1. `S` is invariant under conjugation by `X`, so each element splits into a
//!    commuting part `(A + XAX)/2` and an anticommuting part `(A − XAX)/2`;
//! 2. the commuting parts form a multiplicatively closed span, which then
//!    generates the effective Hamiltonian seen by the next layer out.
//!
//! Spans live in the orthonormal Pauli coordinates `A = Σ r_j R_j`,
//! `r_j = Tr(R_j† A)/4`. They are reported as sets of `Y` (or `Ỹ`) labels: the
//! labels whose expansion coefficient is nonzero for some element of the span.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use nalgebra::DMatrix;

use crate::linalg::{herm_eig, CMat, C64, ZERO};
use crate::operators::{build_basis, build_control, BasisConvention, ControlName, ControlOperator, Family, OperatorBasis};

/// Residual below which a vector counts as lying inside a span.
pub const SPAN_TOL: f64 = 1e-9;

const COMMUTATION_TOL: f64 = 1e-12;

type Coords = [C64; 16];

fn dot(a: &Coords, b: &Coords) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &Coords) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A linear subspace of the two-qubit operator space, held as an orthonormal
/// basis of Pauli coordinate vectors.
#[derive(Clone, Debug, Default)]
pub struct AlgebraSpan {
    basis: Vec<Coords>,
}

impl AlgebraSpan {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Component of `v` orthogonal to the span.
    fn residual(&self, v: &Coords) -> Coords {
        let mut r = *v;
        for b in &self.basis {
            let c = dot(b, &r);
            for k in 0..16 {
                r[k] -= b[k] * c;
            }
        }
        // second pass keeps Gram–Schmidt stable
        for b in &self.basis {
            let c = dot(b, &r);
            for k in 0..16 {
                r[k] -= b[k] * c;
            }
        }
        r
    }

    fn contains_coords(&self, v: &Coords) -> bool {
        norm(&self.residual(v)) <= SPAN_TOL * norm(v).max(1.0)
    }

    /// Adds `v` if it is not already in the span; returns whether it grew.
    fn push(&mut self, v: &Coords) -> bool {
        let r = self.residual(v);
        let n = norm(&r);
        if n <= SPAN_TOL * norm(v).max(1.0) {
            return false;
        }
        self.basis.push(r.map(|z| z / n));
        true
    }

    /// `true` when both spans are the same subspace.
    pub fn same_as(&self, other: &AlgebraSpan) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|v| self.contains_coords(v))
    }

    pub fn is_subspace_of(&self, other: &AlgebraSpan) -> bool {
        self.basis.iter().all(|v| other.contains_coords(v))
    }
}

/// Operator bases and coordinate maps for one basis convention.
#[derive(Clone, Debug)]
pub struct AlgebraContext {
    convention: BasisConvention,
    r: OperatorBasis,
    y: OperatorBasis,
    ytilde: OperatorBasis,
    y_dual: DMatrix<C64>,
    ytilde_dual: DMatrix<C64>,
}

impl AlgebraContext {
    pub fn new(convention: BasisConvention) -> Self {
        let r = build_basis(Family::R, &convention);
        let y = build_basis(Family::Y, &convention);
        let ytilde = build_basis(Family::YTilde, &convention);
        let dual = |fam: &OperatorBasis| {
            let cols: Vec<Coords> = fam.elements().iter().map(|m| pauli_coords(&r, m)).collect();
            let m = DMatrix::from_fn(16, 16, |i, j| cols[j][i]);
            m.try_inverse().expect("operator family is a basis")
        };
        let y_dual = dual(&y);
        let ytilde_dual = dual(&ytilde);
        Self { convention, r, y, ytilde, y_dual, ytilde_dual }
    }

    pub fn convention(&self) -> &BasisConvention {
        &self.convention
    }

    pub fn family(&self, family: Family) -> &OperatorBasis {
        match family {
            Family::Y => &self.y,
            Family::YTilde => &self.ytilde,
            Family::R => &self.r,
        }
    }

    pub fn control(&self, name: ControlName) -> ControlOperator {
        build_control(name, &self.convention)
    }

    pub fn coords(&self, m: &CMat) -> Coords {
        pauli_coords(&self.r, m)
    }

    pub fn operator(&self, c: &Coords) -> CMat {
        let mut out = CMat::zeros(4);
        for (coef, r) in c.iter().zip(self.r.elements()) {
            if *coef != ZERO {
                out = &out + &r.scale(*coef);
            }
        }
        out
    }

    pub fn span_of(&self, ops: &[CMat]) -> AlgebraSpan {
        let mut s = AlgebraSpan::empty();
        for m in ops {
            s.push(&self.coords(m));
        }
        s
    }

    /// Span of the given 1-based labels of a family.
    pub fn span_of_labels(&self, family: Family, labels: impl IntoIterator<Item = usize>) -> AlgebraSpan {
        let fam = self.family(family);
        let ops: Vec<CMat> = labels.into_iter().map(|l| fam.get(l).clone()).collect();
        self.span_of(&ops)
    }

    pub fn full_span(&self) -> AlgebraSpan {
        self.span_of(self.r.elements())
    }

    pub fn identity_span(&self) -> AlgebraSpan {
        self.span_of(&[CMat::identity(4)])
    }

    pub fn contains(&self, span: &AlgebraSpan, m: &CMat) -> bool {
        span.contains_coords(&self.coords(m))
    }

    pub fn basis_operators(&self, span: &AlgebraSpan) -> Vec<CMat> {
        span.basis.iter().map(|c| self.operator(c)).collect()
    }

    /// Labels `i` such that some element of `span` has a nonzero coefficient on
    /// the `i`-th member of `family` (Y or Ỹ).
    pub fn labels(&self, span: &AlgebraSpan, family: Family) -> BTreeSet<usize> {
        let dual = match family {
            Family::Y => &self.y_dual,
            Family::YTilde => &self.ytilde_dual,
            Family::R => {
                let mut out = BTreeSet::new();
                for v in &span.basis {
                    out.extend(v.iter().enumerate().filter(|(_, z)| z.norm() > SPAN_TOL).map(|(i, _)| i + 1));
                }
                return out;
            }
        };
        let mut out = BTreeSet::new();
        for v in &span.basis {
            for i in 0..16 {
                let c: C64 = (0..16).map(|k| dual[(i, k)] * v[k]).sum();
                if c.norm() > SPAN_TOL {
                    out.insert(i + 1);
                }
            }
        }
        out
    }

    /// The span of the labelled operators that `span` touches; the smallest
    /// label-aligned span containing it.
    pub fn label_hull(&self, span: &AlgebraSpan, family: Family) -> AlgebraSpan {
        self.span_of_labels(family, self.labels(span, family))
    }

    pub fn report(&self, span: &AlgebraSpan, family: Family) -> SpanReport {
        SpanReport { family, labels: self.labels(span, family), dim: span.dim() }
    }
}

fn pauli_coords(r: &OperatorBasis, m: &CMat) -> Coords {
    let mut c = [ZERO; 16];
    for (k, rk) in r.elements().iter().enumerate() {
        c[k] = rk.hs_inner(m) / 4.0;
    }
    c
}

/// Label set plus true dimension of a span, for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    pub family: Family,
    pub labels: BTreeSet<usize>,
    pub dim: usize,
}

impl SpanReport {
    pub fn label_list(&self) -> Vec<usize> {
        self.labels.iter().copied().collect()
    }
}

impl fmt::Display for SpanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}  (dim {})", format_labels(self.family, &self.labels), self.dim)
    }
}

/// Compresses consecutive labels: `{1,2,3,4,5,7}` → `Y1..Y5, Y7`.
pub fn format_labels(family: Family, labels: &BTreeSet<usize>) -> String {
    let p = family.prefix();
    let v: Vec<usize> = labels.iter().copied().collect();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[j] + 1 {
            j += 1;
        }
        match j - i {
            0 => parts.push(format!("{p}{}", v[i])),
            1 => {
                parts.push(format!("{p}{}", v[i]));
                parts.push(format!("{p}{}", v[j]));
            }
            _ => parts.push(format!("{p}{}..{p}{}", v[i], v[j])),
        }
        i = j + 1;
    }
    parts.join(", ")
}

/// An element whose conjugation by the control leaves the span.
#[derive(Clone, Debug)]
pub struct Witness {
    /// Set when the witness is one of the labelled basis operators.
    pub label: Option<(Family, usize)>,
    pub operator: CMat,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Some((fam, l)) => write!(f, "{}{}", fam.prefix(), l),
            None => write!(f, "<unlabelled operator>"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Split {
    pub invariant: bool,
    pub commutant: AlgebraSpan,
    pub anticommutant: AlgebraSpan,
    pub witnesses: Vec<Witness>,
}

/// Splits every element of `span` into its parts commuting and anticommuting
/// with the involution `x`.
pub fn conjugation_split(ctx: &AlgebraContext, span: &AlgebraSpan, x: &ControlOperator) -> Split {
    let xm = x.matrix();
    let parts = |a: &CMat| {
        let conj = &(xm * a) * xm;
        let plus = (a + &conj).scale(C64::new(0.5, 0.0));
        let minus = (a - &conj).scale(C64::new(0.5, 0.0));
        (plus, minus)
    };

    let mut commutant = AlgebraSpan::empty();
    let mut anticommutant = AlgebraSpan::empty();
    let mut invariant = true;
    for a in ctx.basis_operators(span) {
        let (plus, minus) = parts(&a);
        let (pc, mc) = (ctx.coords(&plus), ctx.coords(&minus));
        if !span.contains_coords(&pc) || !span.contains_coords(&mc) {
            invariant = false;
        }
        commutant.push(&pc);
        anticommutant.push(&mc);
    }

    let mut witnesses = Vec::new();
    if !invariant {
        for family in [Family::Y, Family::YTilde] {
            for (label, op) in ctx.family(family).iter_labeled() {
                if !ctx.contains(span, op) {
                    continue;
                }
                let (plus, minus) = parts(op);
                if !ctx.contains(span, &plus) || !ctx.contains(span, &minus) {
                    witnesses.push(Witness { label: Some((family, label)), operator: op.clone() });
                }
            }
            if !witnesses.is_empty() {
                break;
            }
        }
        if witnesses.is_empty() {
            for a in ctx.basis_operators(span) {
                let (plus, minus) = parts(&a);
                if !ctx.contains(span, &plus) || !ctx.contains(span, &minus) {
                    witnesses.push(Witness { label: None, operator: a });
                }
            }
        }
    }
    Split { invariant, commutant, anticommutant, witnesses }
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub closed: bool,
    pub closure: AlgebraSpan,
    /// Y labels present in the closure but not in the input.
    pub new_labels: BTreeSet<usize>,
}

/// Smallest multiplicatively closed span containing `span`.
pub fn multiplicative_closure(ctx: &AlgebraContext, span: &AlgebraSpan) -> Closure {
    let mut closure = span.clone();
    loop {
        let ops = ctx.basis_operators(&closure);
        let mut grew = false;
        for a in &ops {
            for b in &ops {
                if closure.push(&ctx.coords(&(a * b))) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let before = ctx.labels(span, Family::Y);
    let new_labels = ctx.labels(&closure, Family::Y).difference(&before).copied().collect();
    Closure { closed: closure.dim() == span.dim(), closure, new_labels }
}

#[derive(Clone, Debug)]
pub enum StepOutcome {
    /// The layer meets both requirements; `next` generates the effective
    /// Hamiltonian seen by the next layer out.
    Reduced {
        next: AlgebraSpan,
        /// The exact span was not invariant and the split was carried out on
        /// its label hull instead.
        relabelled: bool,
    },
    NonInvariant { witnesses: Vec<Witness> },
    /// The commutant is not closed; the chain continues with its closure.
    ClosureFailure { commutant: AlgebraSpan, next: AlgebraSpan, regenerated: BTreeSet<usize>, relabelled: bool },
}

#[derive(Clone, Debug)]
pub struct ChainStep {
    pub control: ControlName,
    pub input: AlgebraSpan,
    pub outcome: StepOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainClass {
    /// Every layer reduced the algebra.
    Reduced,
    /// At least one layer regenerated operators through non-closure.
    ClosureBreakdown,
    /// Some layer could not split its input at all.
    NonInvariantBreakdown,
}

#[derive(Clone, Debug)]
pub struct ReductionChain {
    /// Outer-to-inner, as written in orderings like `Xphi-X1-X0`.
    pub layers: Vec<ControlName>,
    pub start: AlgebraSpan,
    /// Innermost layer first.
    pub steps: Vec<ChainStep>,
}

impl ReductionChain {
    pub fn class(&self) -> ChainClass {
        let mut class = ChainClass::Reduced;
        for s in &self.steps {
            match s.outcome {
                StepOutcome::NonInvariant { .. } => return ChainClass::NonInvariantBreakdown,
                StepOutcome::ClosureFailure { .. } => class = ChainClass::ClosureBreakdown,
                StepOutcome::Reduced { .. } => {}
            }
        }
        class
    }

    /// The span after the last completed step, or `None` if the chain stopped
    /// on a non-invariant layer.
    pub fn final_span(&self) -> Option<&AlgebraSpan> {
        match self.steps.last() {
            None => Some(&self.start),
            Some(s) => match &s.outcome {
                StepOutcome::Reduced { next, .. } | StepOutcome::ClosureFailure { next, .. } => Some(next),
                StepOutcome::NonInvariant { .. } => None,
            },
        }
    }

    /// Spans in chain order, starting with `start` and ending at the last
    /// completed step.
    pub fn spans(&self) -> Vec<&AlgebraSpan> {
        let mut out = vec![&self.start];
        for s in &self.steps {
            match &s.outcome {
                StepOutcome::Reduced { next, .. } | StepOutcome::ClosureFailure { next, .. } => out.push(next),
                StepOutcome::NonInvariant { .. } => break,
            }
        }
        out
    }

    /// Chart text: one box per line, `⇓ <control>` between boxes.
    pub fn render(&self, ctx: &AlgebraContext, family: Family) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", ctx.report(&self.start, family));
        for s in &self.steps {
            match &s.outcome {
                StepOutcome::Reduced { next, relabelled } => {
                    let note = if *relabelled { "  [split on label hull]" } else { "" };
                    let _ = writeln!(out, "⇓ {}{note}", s.control);
                    let _ = writeln!(out, "{}", ctx.report(next, family));
                }
                StepOutcome::ClosureFailure { next, regenerated, relabelled, .. } => {
                    let note = if *relabelled { ", split on label hull" } else { "" };
                    let _ = writeln!(
                        out,
                        "⇓ {}  [closure breakdown: regenerates {}{note}]",
                        s.control,
                        format_labels(Family::Y, regenerated)
                    );
                    let _ = writeln!(out, "{}", ctx.report(next, family));
                }
                StepOutcome::NonInvariant { witnesses } => {
                    let names: Vec<String> = witnesses.iter().map(|w| w.to_string()).collect();
                    let _ = writeln!(out, "⇓ {}", s.control);
                    let _ = writeln!(
                        out,
                        "✗ breakdown: neither commuting nor anticommuting: {}",
                        names.join(", ")
                    );
                }
            }
        }
        out
    }
}

/// Applies the layers of an outer-to-inner ordering innermost first.
///
/// Each step first tries the exact span. If that is not invariant under the
/// layer's control, the step is retried on the span's Y-label hull (the span
/// rewritten as independent Y coefficients); only if the hull also fails does
/// the chain stop with a non-invariance breakdown.
pub fn predict_chain(ctx: &AlgebraContext, ordering: &[ControlName], start: &AlgebraSpan) -> ReductionChain {
    let mut steps = Vec::new();
    let mut current = start.clone();
    for &name in ordering.iter().rev() {
        let x = ctx.control(name);
        let input = current.clone();
        let mut split = conjugation_split(ctx, &current, &x);
        let mut relabelled = false;
        if !split.invariant {
            let hull = ctx.label_hull(&current, Family::Y);
            let hull_split = conjugation_split(ctx, &hull, &x);
            if hull_split.invariant {
                split = hull_split;
                relabelled = true;
            }
        }
        if !split.invariant {
            steps.push(ChainStep { control: name, input, outcome: StepOutcome::NonInvariant { witnesses: split.witnesses } });
            break;
        }
        let closure = multiplicative_closure(ctx, &split.commutant);
        let outcome = if closure.closed {
            current = split.commutant;
            StepOutcome::Reduced { next: current.clone(), relabelled }
        } else {
            current = closure.closure;
            StepOutcome::ClosureFailure {
                commutant: split.commutant,
                next: current.clone(),
                regenerated: closure.new_labels,
                relabelled,
            }
        };
        steps.push(ChainStep { control: name, input, outcome });
    }
    ReductionChain { layers: ordering.to_vec(), start: start.clone(), steps }
}

/// Orthogonal projector onto the smallest state subspace that carries every
/// operator in `span`.
pub fn support_projector(ctx: &AlgebraContext, span: &AlgebraSpan) -> CMat {
    let mut gram = CMat::zeros(4);
    for b in ctx.basis_operators(span) {
        gram = &gram + &(&(&b * &b.adjoint()) + &(&b.adjoint() * &b));
    }
    projector_onto_range(&gram)
}

fn projector_onto_range(h: &CMat) -> CMat {
    let eig = herm_eig(h).expect("Gram matrix is Hermitian");
    let v = eig.eigenvectors();
    let top = eig.eigenvalues().iter().cloned().fold(0.0, f64::max).max(1.0);
    let mut p = CMat::zeros(h.dim());
    for (k, &l) in eig.eigenvalues().iter().enumerate() {
        if l > SPAN_TOL * top {
            let col: Vec<C64> = (0..h.dim()).map(|i| v[(i, k)]).collect();
            p = &p + &CMat::outer(&col, &col).expect("same length");
        }
    }
    p
}

/// `true` when `AB = ±BA` on the subspace that `span` acts on; then nesting
/// `A` around `B` and `B` around `A` give the same effective Hamiltonian.
pub fn ordering_exchangeable(ctx: &AlgebraContext, a: &ControlOperator, b: &ControlOperator, span: &AlgebraSpan) -> bool {
    exchangeable_on(a.matrix(), b.matrix(), &support_projector(ctx, span))
}

/// Same test on the span of the given basis-state labels.
pub fn ordering_exchangeable_on_states(ctx: &AlgebraContext, a: &ControlOperator, b: &ControlOperator, labels: &[usize]) -> bool {
    let mut p = CMat::zeros(4);
    for &l in labels {
        p = &p + &ctx.convention().projector(l);
    }
    exchangeable_on(a.matrix(), b.matrix(), &p)
}

fn exchangeable_on(a: &CMat, b: &CMat, p: &CMat) -> bool {
    let ab = a * b;
    let ba = b * a;
    let zero = CMat::zeros(a.dim());
    let restrict = |m: &CMat| &(p * m) * p;
    restrict(&(&ab - &ba)).approx_eq(&zero, COMMUTATION_TOL) || restrict(&(&ab + &ba)).approx_eq(&zero, COMMUTATION_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ControlName::*;

    fn ctx() -> AlgebraContext {
        AlgebraContext::new(BasisConvention::standard())
    }

    fn set(v: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        v.into_iter().collect()
    }

    #[test]
    fn full_span_under_x0() {
        let c = ctx();
        let split = conjugation_split(&c, &c.full_span(), &c.control(X0));
        assert!(split.invariant);
        assert_eq!(split.commutant.dim(), 10);
        assert_eq!(c.labels(&split.commutant, Family::Y), set(1..=10));
        assert_eq!(split.anticommutant.dim(), 6);
        assert_eq!(c.labels(&split.anticommutant, Family::Y), set(11..=16));
    }

    #[test]
    fn xphi_breaks_x0_commutant() {
        let c = ctx();
        let span = c.span_of_labels(Family::Y, 1..=10);
        let split = conjugation_split(&c, &span, &c.control(Xphi));
        assert!(!split.invariant);
        assert!(split.witnesses.iter().any(|w| w.label == Some((Family::Y, 7))));
    }

    #[test]
    fn identity_span_is_trivially_invariant() {
        let c = ctx();
        for name in ControlName::ALL {
            let split = conjugation_split(&c, &c.identity_span(), &c.control(name));
            assert!(split.invariant);
            assert!(split.commutant.same_as(&c.identity_span()));
            assert!(split.anticommutant.is_empty());
        }
    }

    #[test]
    fn closure_examples() {
        let c = ctx();
        assert!(multiplicative_closure(&c, &c.span_of_labels(Family::Y, 1..=10)).closed);
        assert!(multiplicative_closure(&c, &c.span_of_labels(Family::Y, [1, 2])).closed);
        let open = c.span_of_labels(Family::Y, (1..=5).chain(11..=14));
        let cl = multiplicative_closure(&c, &open);
        assert!(!cl.closed);
        assert!(cl.new_labels.contains(&6));

        // 2·Y11·Y12 − Y2 = Y6
        let y = c.family(Family::Y);
        let prod = &(y.get(11) * y.get(12)).scale(C64::new(2.0, 0.0)) - y.get(2);
        assert!(prod.approx_eq(y.get(6), 1e-14));
    }

    #[test]
    fn label_support_uses_expansion_coefficients() {
        let c = ctx();
        assert_eq!(c.labels(&c.identity_span(), Family::Y), set([1]));
        let xphi_comm = conjugation_split(&c, &c.full_span(), &c.control(Xphi)).commutant;
        assert_eq!(xphi_comm.dim(), 10);
        assert_eq!(c.labels(&xphi_comm, Family::Y), set((1..=5).chain(7..=15)));
        assert_eq!(c.labels(&xphi_comm, Family::YTilde), set((1..=5).chain(7..=10).chain([15])));
    }

    #[test]
    fn format_labels_compresses_runs() {
        assert_eq!(format_labels(Family::Y, &set((1..=5).chain([7, 8]).chain(10..=15))), "Y1..Y5, Y7, Y8, Y10..Y15");
    }

    #[test]
    fn exchangeability() {
        let c = ctx();
        let full = c.full_span();
        assert!(ordering_exchangeable(&c, &c.control(X0), &c.control(X1), &full));
        assert!(!ordering_exchangeable(&c, &c.control(X0), &c.control(Xphi), &full));
        assert!(ordering_exchangeable(&c, &c.control(Z1), &c.control(Z2), &full));
        assert!(ordering_exchangeable(&c, &c.control(Z2), &c.control(Z3), &full));
        // X1 and Xphi anticommute on span{|0⟩,|1⟩} only
        assert!(!ordering_exchangeable(&c, &c.control(X1), &c.control(Xphi), &full));
        assert!(ordering_exchangeable_on_states(&c, &c.control(X1), &c.control(Xphi), &[0, 1]));
    }

    #[test]
    fn split_is_direct_sum_and_idempotent() {
        let c = ctx();
        for name in ControlName::ALL {
            let x = c.control(name);
            let split = conjugation_split(&c, &c.full_span(), &x);
            assert_eq!(split.commutant.dim() + split.anticommutant.dim(), 16);
            for a in c.basis_operators(&split.commutant) {
                for b in c.basis_operators(&split.anticommutant) {
                    assert!(a.hs_inner(&b).norm() < 1e-12);
                }
            }
            let again = conjugation_split(&c, &split.commutant, &x);
            assert!(again.invariant);
            assert!(again.commutant.same_as(&split.commutant));
            assert!(again.anticommutant.is_empty());
        }
    }
}
