//! Finite-level checks of spanning, fixed vectors, irreducibility and the
//! hypotheses of the irreducibility-to-arithmeticity criterion.
//!
//! Every verdict carries its witness. Nothing here decides finite index:
//! bounded closures that do not settle report `Inconclusive`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::cover::{build_cover, CoverSpec, Word};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hermitian::{expand_rational, gamma_generators};
use crate::homology::{homology, CycleClass, HomologyModule, HomologySummary};
use crate::linalg::{
    joint_kernel, nullspace_mod_p, to_q_vec, Matrix, QMatrix, Subspace, ZMatrix, Q,
};
use crate::repr::{
    central_idempotents, isotypical_projection, ExceptionalLabel, GModule, IsotypicalBlock,
};
use crate::twist::{
    complete_to_hyperbolic, gamma_ab_generators, gamma_o_ab_generators,
    EquivariantSymplecticMatrix, HyperbolicPair, NamedMatrix,
};

pub const DEFAULT_MAX_WORD_LEN: usize = 6;
pub const DEFAULT_CLOSURE_ROUNDS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    /// Fail dominates, then inconclusive.
    pub fn combine(self, o: Status) -> Status {
        match (self, o) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }

    fn of(b: bool) -> Status {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

fn q_rows(vs: &[Vec<Q>]) -> Vec<Vec<String>> {
    vs.iter()
        .map(|v| v.iter().map(ToString::to_string).collect())
        .collect()
}

fn int_vec(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// A subgroup of `Sp(H₁)^G` given by generators, with their inverses cached.
#[derive(Clone, Debug)]
pub struct GeneratedGroup {
    rank: usize,
    generators: Vec<NamedMatrix>,
    inverses: Vec<ZMatrix>,
}

/// Result of a bounded word search.
#[derive(Clone, Debug, Serialize)]
pub struct WordSearch {
    pub status: Status,
    /// Generator names (`name^-1` for inverses), rightmost applied first.
    pub word: Option<Vec<String>>,
    pub max_len: usize,
    pub explored: usize,
}

impl GeneratedGroup {
    pub fn new(h: &HomologyModule, generators: Vec<NamedMatrix>) -> Self {
        let inverses = generators
            .iter()
            .map(|g| g.matrix.inverse(h).matrix().clone())
            .collect();
        GeneratedGroup {
            rank: h.rank(),
            generators,
            inverses,
        }
    }

    /// The trivial group.
    pub fn trivial(h: &HomologyModule) -> Self {
        Self::new(h, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[NamedMatrix] {
        &self.generators
    }

    pub fn extend(&mut self, other: &GeneratedGroup) {
        self.generators.extend(other.generators.iter().cloned());
        self.inverses.extend(other.inverses.iter().cloned());
    }

    /// Generators followed by their inverses, with names.
    fn letters(&self) -> Vec<(String, &ZMatrix)> {
        let fwd = self
            .generators
            .iter()
            .map(|g| (g.name.clone(), g.matrix.matrix()));
        let bwd = self
            .generators
            .iter()
            .zip(&self.inverses)
            .map(|(g, m)| (format!("{}^-1", g.name), m));
        fwd.chain(bwd).collect()
    }

    /// Breadth-first search for `target` among words of length ≤ `max_len`.
    pub fn contains_within(
        &self,
        target: &EquivariantSymplecticMatrix,
        max_len: usize,
    ) -> WordSearch {
        let letters = self.letters();
        let id = ZMatrix::identity(self.rank);
        let key = |m: &ZMatrix| m.to_i64_rows();
        // matrix → (parent key, letter index)
        let mut seen: HashMap<Vec<Vec<i64>>, Option<(Vec<Vec<i64>>, usize)>> = HashMap::new();
        seen.insert(key(&id), None);
        let goal = key(target.matrix());
        let mut frontier = vec![id];
        let mut found = seen.contains_key(&goal);
        let mut len = 0;
        while !found && len < max_len && !frontier.is_empty() {
            len += 1;
            let mut next = Vec::new();
            for m in &frontier {
                let km = key(m);
                for (li, (_, l)) in letters.iter().enumerate() {
                    let p = *l * m;
                    let kp = key(&p);
                    if seen.contains_key(&kp) {
                        continue;
                    }
                    seen.insert(kp.clone(), Some((km.clone(), li)));
                    if kp == goal {
                        found = true;
                    }
                    next.push(p);
                }
            }
            frontier = next;
        }
        let word = found.then(|| {
            let mut out = Vec::new();
            let mut k = goal.clone();
            while let Some(Some((parent, li))) = seen.get(&k) {
                out.push(letters[*li].0.clone());
                k = parent.clone();
            }
            out
        });
        let status = if found {
            Status::Pass
        } else if frontier.is_empty() {
            // the group is finite and fully enumerated
            Status::Fail
        } else {
            Status::Inconclusive
        };
        WordSearch {
            status,
            word,
            max_len,
            explored: seen.len(),
        }
    }
}

/// The ℚG-span of `{a} ∪ B` and its J-orthogonal.
#[derive(Clone, Debug, Serialize)]
pub struct SpanVerdict {
    pub status: Status,
    pub dim: usize,
    pub perp_dim: usize,
    pub ambient: usize,
    /// `dim + perp_dim = ambient`.
    pub cross_check: bool,
    pub basis: Vec<Vec<String>>,
    pub perp_basis: Vec<Vec<String>>,
}

fn g_span(h: &HomologyModule, vs: &[&CycleClass]) -> Subspace {
    let mut s = Subspace::new(h.rank());
    for v in vs {
        for g in 0..h.group().order() {
            s.insert(&to_q_vec(&h.act(g, v).coords));
        }
    }
    s
}

fn j_perp(h: &HomologyModule, s: &Subspace) -> Vec<Vec<Q>> {
    let jq = h.intersection().to_q();
    let rows: Vec<Vec<Q>> = s
        .basis()
        .iter()
        .map(|u| jq.transpose().mul_vec(u))
        .collect();
    if rows.is_empty() {
        return QMatrix::identity(h.rank()).row_vecs();
    }
    QMatrix::from_rows(rows).nullspace()
}

pub fn span_check(
    h: &HomologyModule,
    a: &CycleClass,
    pairs: &[HyperbolicPair],
) -> Result<SpanVerdict> {
    for p in pairs {
        p.verify(h)?;
        if &p.a != a {
            return Err(Error::Precondition(
                "pair does not share the class a".into(),
            ));
        }
    }
    let mut vs = vec![a];
    vs.extend(pairs.iter().map(|p| &p.b));
    let s = g_span(h, &vs);
    let perp = j_perp(h, &s);
    let cross_check = s.dim() + perp.len() == h.rank();
    if !cross_check {
        return Err(Error::Internal(
            "span and perp dimensions do not add up: J is degenerate".into(),
        ));
    }
    Ok(SpanVerdict {
        status: Status::of(s.dim() == h.rank()),
        dim: s.dim(),
        perp_dim: perp.len(),
        ambient: h.rank(),
        cross_check,
        basis: q_rows(s.basis()),
        perp_basis: q_rows(&perp),
    })
}

/// `{x : Mx = x}` for all generators, over ℚ.
#[derive(Clone, Debug, Serialize)]
pub struct FixedVerdict {
    pub status: Status,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

pub fn fixed_subspace_basis(gg: &GeneratedGroup) -> Vec<Vec<Q>> {
    let id = ZMatrix::identity(gg.rank);
    let ms: Vec<QMatrix> = gg
        .generators
        .iter()
        .map(|g| (g.matrix.matrix() - &id).to_q())
        .collect();
    joint_kernel(&ms, gg.rank)
}

pub fn fixed_subspace(gg: &GeneratedGroup) -> FixedVerdict {
    let basis = fixed_subspace_basis(gg);
    FixedVerdict {
        status: Status::of(basis.is_empty()),
        dim: basis.len(),
        basis: q_rows(&basis),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModLVerdict {
    pub prime: u64,
    pub status: Status,
    pub dim: usize,
    pub basis: Vec<Vec<u64>>,
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Joint fixed vectors of the generators reduced mod `ℓ`.
pub fn mod_l_fixed_vectors(gg: &GeneratedGroup, l: u64) -> Result<ModLVerdict> {
    if !is_prime(l) {
        return Err(Error::Precondition(format!("{l} is not prime")));
    }
    let id = ZMatrix::identity(gg.rank);
    let basis = if gg.generators.is_empty() {
        (0..gg.rank)
            .map(|i| (0..gg.rank).map(|j| u64::from(i == j)).collect())
            .collect()
    } else {
        let ms: Vec<ZMatrix> = gg
            .generators
            .iter()
            .map(|g| g.matrix.matrix() - &id)
            .collect();
        nullspace_mod_p(&Matrix::vstack(&ms), l)
    };
    Ok(ModLVerdict {
        prime: l,
        status: Status::of(basis.is_empty()),
        dim: basis.len(),
        basis,
    })
}

/// Burnside-style check on one isotypical component.
#[derive(Clone, Debug, Serialize)]
pub struct IrreducibilityVerdict {
    pub block_index: usize,
    /// `pass` certifies irreducibility; `fail` means the generated algebra is
    /// smaller than the commutant of the block on the component.
    pub status: Status,
    pub component_dim: usize,
    pub algebra_dim: usize,
    pub target_dim: usize,
    pub rounds: usize,
    pub exceptional_label: ExceptionalLabel,
}

/// Dimension of `End_B(C)` for `C = e·W ≅ S^k`: `k²μ²/d`.
pub fn commutant_dim(block: &IsotypicalBlock, component_dim: usize) -> usize {
    let mu = block.min_ideal_dim;
    let k = component_dim / mu;
    k * k * mu * mu / block.dim_q
}

/// Grows the algebra spanned by words in `gens` (restricted to the
/// `block`-component of `w`) until stable or `max_rounds` is exhausted.
pub fn block_irreducibility(
    gens: &[QMatrix],
    block: &IsotypicalBlock,
    w: &GModule,
    max_rounds: usize,
) -> Result<IrreducibilityVerdict> {
    let comp = isotypical_projection(block, w)?;
    let d = comp.dim();
    let restricted: Vec<QMatrix> = gens
        .iter()
        .map(|m| {
            comp.restrict(m).ok_or_else(|| {
                Error::Precondition("generator does not preserve the isotypical component".into())
            })
        })
        .collect::<Result<_>>()?;
    let flat = |m: &QMatrix| -> Vec<Q> { m.row_vecs().concat() };
    let mut span = Subspace::new(d * d);
    let id = QMatrix::identity(d);
    span.insert(&flat(&id));
    let mut frontier = vec![id];
    let mut rounds = 0;
    while !frontier.is_empty() && rounds < max_rounds {
        rounds += 1;
        let mut next = Vec::new();
        for x in &frontier {
            for g in &restricted {
                let y = x * g;
                if span.insert(&flat(&y)) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let target = commutant_dim(block, d);
    let status = if !frontier.is_empty() {
        Status::Inconclusive
    } else {
        Status::of(span.dim() == target)
    };
    Ok(IrreducibilityVerdict {
        block_index: block.index,
        status,
        component_dim: d,
        algebra_dim: span.dim(),
        target_dim: target,
        rounds,
        exceptional_label: block.exceptional_label,
    })
}

/// Γ(G) on every block of `ℋ²(ℚG)`.
pub fn hyperbolic_irreducibility(
    group: &Arc<FiniteGroup>,
    max_rounds: usize,
) -> Result<Vec<IrreducibilityVerdict>> {
    let gens: Vec<_> = gamma_generators(group)
        .into_iter()
        .map(|g| g.matrix)
        .collect();
    let gens = expand_rational(&gens);
    let w = GModule::free(group, 2);
    central_idempotents(group)?
        .iter()
        .map(|b| block_irreducibility(&gens, b, &w, max_rounds))
        .collect()
}

/// Growth of `ℚΓa` by word length.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeVerdict {
    pub status: Status,
    /// `rank_by_length[L]` = rank of the span of all `w·a` with `|w| ≤ L`.
    pub rank_by_length: Vec<usize>,
    pub target: usize,
    pub max_len: usize,
}

pub fn lattice_rank_growth(gg: &GeneratedGroup, a: &CycleClass, max_len: usize) -> LatticeVerdict {
    let letters = gg.letters();
    let mut span = Subspace::new(gg.rank);
    span.insert(&to_q_vec(&a.coords));
    let mut ranks = vec![span.dim()];
    let mut stable = false;
    while ranks.len() <= max_len && span.dim() < gg.rank && !stable {
        let basis = span.basis().to_vec();
        let mut grew = false;
        for (_, m) in &letters {
            let mq = m.to_q();
            for v in &basis {
                grew |= span.insert(&mq.mul_vec(v));
            }
        }
        ranks.push(span.dim());
        stable = !grew;
    }
    let status = if span.dim() == gg.rank {
        Status::Pass
    } else if stable {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    LatticeVerdict {
        status,
        rank_by_length: ranks,
        target: gg.rank,
        max_len,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProvisoBlock {
    pub block_index: usize,
    pub exceptional_label: ExceptionalLabel,
    /// ℚ-dimension of the block component of `ℚG·{a, b₁, …}`.
    pub component_dim: usize,
    /// Rank of that component over the block's skew field.
    pub rank_over_d: usize,
    pub needs_proviso: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationVerdict {
    pub status: Status,
    pub lattice: LatticeVerdict,
    /// Indices `(j₁, j₂)` of pairs with `⟨b₁,b₂⟩ = 0`.
    pub orthogonal_pair: Option<(usize, usize)>,
    pub blocks: Vec<ProvisoBlock>,
    pub proviso_satisfied: bool,
}

pub fn generation_hypotheses(
    h: &HomologyModule,
    gg: &GeneratedGroup,
    a: &CycleClass,
    pairs: &[HyperbolicPair],
    blocks: &[IsotypicalBlock],
    max_len: usize,
) -> Result<GenerationVerdict> {
    for p in pairs {
        if &p.a != a {
            return Err(Error::Precondition("pairs do not share the class a".into()));
        }
    }
    let lattice = lattice_rank_growth(gg, a, max_len);
    let mut orthogonal_pair = None;
    'outer: for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if h.hermitian_form(&pairs[i].b, &pairs[j].b).is_zero() {
                orthogonal_pair = Some((i, j));
                break 'outer;
            }
        }
    }
    let mut vs = vec![a];
    vs.extend(pairs.iter().map(|p| &p.b));
    let m = g_span(h, &vs);
    let w = GModule::from_integer(h.group(), h.actions())?;
    let mut out = Vec::new();
    for b in blocks {
        let comp = isotypical_projection(b, &w)?;
        let mut inter = Subspace::new(h.rank());
        let e = w.element_action(&b.idempotent);
        for v in m.basis() {
            inter.insert(&e.mul_vec(v));
        }
        let rank_over_d = inter.dim() / b.min_ideal_dim;
        debug_assert!(inter.is_subspace_of(&comp.subspace));
        out.push(ProvisoBlock {
            block_index: b.index,
            exceptional_label: b.exceptional_label,
            component_dim: inter.dim(),
            rank_over_d,
            needs_proviso: b.min_ideal_dim == b.dim_q && rank_over_d > 2,
        });
    }
    let proviso_satisfied = orthogonal_pair.is_some() || out.iter().all(|b| !b.needs_proviso);
    let status = lattice.status.combine(Status::of(proviso_satisfied));
    Ok(GenerationVerdict {
        status,
        lattice,
        orthogonal_pair,
        blocks: out,
        proviso_satisfied,
    })
}

/// Tunables for [`diagnose`].
#[derive(Clone, Debug)]
pub struct DiagnoseOptions {
    pub max_word_len: usize,
    pub primes: Vec<u64>,
    pub closure_rounds: usize,
}

impl Default for DiagnoseOptions {
    fn default() -> Self {
        DiagnoseOptions {
            max_word_len: DEFAULT_MAX_WORD_LEN,
            primes: vec![2, 3, 5],
            closure_rounds: DEFAULT_CLOSURE_ROUNDS,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub beta: String,
    /// How the lift was normalized so that `⟨a,b0⟩ = 1`, e.g. `-t·`.
    pub normalization: String,
    pub b: Vec<String>,
    pub lambda: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticsReport {
    pub status: Status,
    pub homology: HomologySummary,
    pub alpha: String,
    pub a: Vec<String>,
    pub pairs: Vec<PairReport>,
    pub gamma_o_generators: usize,
    pub gamma_generators: usize,
    pub span: SpanVerdict,
    pub fixed_gamma_o: FixedVerdict,
    /// Mod-ℓ fixed vectors of Γ(a); these enter the overall status.
    pub mod_l: Vec<ModLVerdict>,
    /// Mod-ℓ fixed vectors of Γ_o(a), informational only: Γ_o(a) can lie in a
    /// level-ℓ congruence subgroup (for ℓ = 2 whenever R₊₊ ⊆ 2R, e.g. G of
    /// exponent ≤ 2), in which case every vector is fixed mod ℓ.
    pub mod_l_gamma_o: Vec<ModLVerdict>,
    pub irreducibility: Vec<IrreducibilityVerdict>,
    pub generation: GenerationVerdict,
    /// Blocks flagged as exceptional; no stance is taken on them.
    pub exceptional_blocks: Vec<usize>,
}

/// Rescales `b0` by a trivial unit `±g` so that `⟨a, b0⟩ = 1`.
pub fn normalize_dual(
    h: &HomologyModule,
    a: &CycleClass,
    b0: &CycleClass,
) -> Result<(CycleClass, String)> {
    let g = h.group();
    let p = h.hermitian_form(a, b0);
    let support: Vec<usize> = (0..g.order()).filter(|&k| !p.coeff(k).is_zero()).collect();
    let [k] = support[..] else {
        return Err(Error::Precondition(format!(
            "⟨a,b0⟩ = {p} is not a trivial unit"
        )));
    };
    let c = p.coeff(k);
    let sign = if *c == BigInt::from(1) {
        ""
    } else if *c == BigInt::from(-1) {
        "-"
    } else {
        return Err(Error::Precondition(format!(
            "⟨a,b0⟩ = {p} is not a trivial unit"
        )));
    };
    // ⟨a, ±g·b0⟩ = ⟨a,b0⟩·(±g)† = ±e_k·(±e_{g⁻¹}), so take g = k.
    let mut b = h.act(k, b0);
    if !sign.is_empty() {
        b = b.neg();
    }
    let note = if k == 0 {
        sign.to_string()
    } else {
        format!("{sign}{}·", g.label(k))
    };
    Ok((b, note))
}

/// The full pipeline on a cover: `a` lifts `alpha`, each `beta` yields a
/// hyperbolic pair, and Γ_o(a), Γ(a) are generated by the pairs' generators.
pub fn diagnose(
    spec: &CoverSpec,
    alpha: &Word,
    betas: &[Word],
    opts: &DiagnoseOptions,
) -> Result<DiagnosticsReport> {
    let surface = build_cover(spec)?;
    let h = homology(&surface)?;
    let a = h.lift_class(alpha)?;
    let mut pairs = Vec::new();
    let mut pair_reports = Vec::new();
    for beta in betas {
        let (b0, normalization) = normalize_dual(&h, &a, &h.lift_class(beta)?)?;
        let pair = complete_to_hyperbolic(&h, &a, &b0)?;
        pair_reports.push(PairReport {
            beta: beta.to_string(),
            normalization,
            b: int_vec(&pair.b.coords),
            lambda: crate::twist::element_terms(h.group(), &pair.lambda),
        });
        pairs.push(pair);
    }
    let mut gamma_o = GeneratedGroup::trivial(&h);
    let mut gamma = GeneratedGroup::trivial(&h);
    for p in &pairs {
        gamma_o.extend(&GeneratedGroup::new(&h, gamma_o_ab_generators(&h, p)?));
        gamma.extend(&GeneratedGroup::new(&h, gamma_ab_generators(&h, p)?));
    }
    let span = span_check(&h, &a, &pairs)?;
    let fixed_gamma_o = fixed_subspace(&gamma_o);
    let mod_l = opts
        .primes
        .iter()
        .map(|&l| mod_l_fixed_vectors(&gamma, l))
        .collect::<Result<Vec<_>>>()?;
    let mod_l_gamma_o = opts
        .primes
        .iter()
        .map(|&l| mod_l_fixed_vectors(&gamma_o, l))
        .collect::<Result<Vec<_>>>()?;
    let blocks = central_idempotents(h.group())?;
    let w = GModule::from_integer(h.group(), h.actions())?;
    let gens_q: Vec<QMatrix> = gamma
        .generators()
        .iter()
        .map(|g| g.matrix.matrix().to_q())
        .collect();
    let irreducibility = blocks
        .iter()
        .map(|b| block_irreducibility(&gens_q, b, &w, opts.closure_rounds))
        .collect::<Result<Vec<_>>>()?;
    let generation = generation_hypotheses(&h, &gamma, &a, &pairs, &blocks, opts.max_word_len)?;
    let mut status = span
        .status
        .combine(fixed_gamma_o.status)
        .combine(generation.status);
    for v in &mod_l {
        status = status.combine(v.status);
    }
    for v in &irreducibility {
        if v.component_dim > 0 {
            status = status.combine(v.status);
        }
    }
    Ok(DiagnosticsReport {
        status,
        homology: h.summary(),
        alpha: alpha.to_string(),
        a: int_vec(&a.coords),
        pairs: pair_reports,
        gamma_o_generators: gamma_o.generators().len(),
        gamma_generators: gamma.generators().len(),
        span,
        fixed_gamma_o,
        mod_l,
        mod_l_gamma_o,
        irreducibility,
        generation,
        exceptional_blocks: blocks
            .iter()
            .filter(|b| b.exceptional_label.is_exceptional())
            .map(|b| b.index)
            .collect(),
    })
}
