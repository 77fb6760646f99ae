//! The embedding `S_{2g+2} → Sp_{2g}(F_2)` in tensor notation.
//!
//! `S_{2g+2}` permutes the coordinates of `V = F_2^{2g+2}`, preserving the dot
//! product, the all-ones vector `t`, and hence `W = t^⊥ / ⟨t⟩`. The map `ψ`
//! identifies `M = F_2^{2g}` (adjacent-pairs form) with `W`, and the adjacent
//! transposition `(k, k+1)` becomes the matrix `T_k`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symplectic::{
    gsp_basis, phi, sp_basis, span_report, tensor, tensor_index, x_add, x_unit, y_identity, y_unit,
    LieClass, MatMod, Span, SpanReport, SympForm,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("genus {0} unsupported (need 1 <= g <= 31)")]
    Genus(usize),
    #[error("transposition index {k} outside 1..={max}")]
    TranspositionIndex { k: usize, max: usize },
    #[error("permutation on {got} letters, expected {expected}")]
    Degree { expected: usize, got: usize },
    #[error("not a permutation: {0:?}")]
    NotBijective(Vec<usize>),
}

/// Permutation of `{0, …, n-1}` stored by images. Letters print 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, EmbedError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(EmbedError::NotBijective(images));
            }
        }
        Ok(Permutation { images })
    }

    /// From 1-based images, as written in cycle-free one-line notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self, EmbedError> {
        Self::new(images.iter().map(|&i| i.wrapping_sub(1)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// The transposition of 1-based letters `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a - 1, b - 1);
        Permutation { images }
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// `k_1, …, k_r` (1-based) with `self = (k_1 k_1+1) ∘ … ∘ (k_r k_r+1)`,
    /// found by bubble-sorting the one-line notation.
    pub fn adjacent_decomposition(&self) -> Vec<usize> {
        let mut a = self.images.clone();
        let mut swaps = Vec::new();
        let n = a.len();
        for pass in 0..n {
            for j in 0..n.saturating_sub(1 + pass) {
                if a[j] > a[j + 1] {
                    // a ∘ s_{j+1}
                    a.swap(j, j + 1);
                    swaps.push(j + 1);
                }
            }
        }
        swaps.reverse();
        swaps
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// `ψ : M → W` together with the ambient data, vectors of `V` as bitmasks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingData {
    pub g: usize,
    /// `t = (1, …, 1)` in `V`.
    pub t: u64,
    /// `psi[tensor_index(i, n)]` is a representative of `ψ(x_i ⊗ y_n)` in `t^⊥`.
    pub psi: Vec<u64>,
}

fn dot(u: u64, v: u64) -> u64 {
    ((u & v).count_ones() & 1) as u64
}

fn bits_upto(k: usize) -> u64 {
    // e_1 + … + e_k
    if k == 0 {
        0
    } else {
        u64::MAX >> (64 - k)
    }
}

impl EmbeddingData {
    pub fn new(g: usize) -> Result<Self, EmbedError> {
        if g == 0 || g > 31 {
            return Err(EmbedError::Genus(g));
        }
        let n = 2 * g + 2;
        let mut psi = vec![0u64; 2 * g];
        for y in 1..=g {
            psi[tensor_index(1, y)] = bits_upto(2 * y);
            psi[tensor_index(2, y)] = (1 << (2 * y)) | bits_upto(2 * y - 1);
        }
        Ok(EmbeddingData {
            g,
            t: bits_upto(n),
            psi,
        })
    }

    pub fn letters(&self) -> usize {
        2 * self.g + 2
    }

    /// `⟨ψ(u), ψ(v)⟩_V = ⟨u, v⟩_M` on all basis pairs, `ψ(M) ⊂ t^⊥`, and `t ∈ t^⊥`.
    pub fn verify_intertwining(&self) -> bool {
        let form = SympForm::adjacent_pairs(self.g, 2);
        let n = 2 * self.g;
        let in_perp = self.psi.iter().all(|&v| dot(v, self.t) == 0) && dot(self.t, self.t) == 0;
        let forms_match = (0..n).all(|a| {
            (0..n).all(|b| {
                let ea: Vec<u64> = (0..n).map(|i| (i == a) as u64).collect();
                let eb: Vec<u64> = (0..n).map(|i| (i == b) as u64).collect();
                dot(self.psi[a], self.psi[b]) == form.pair(&ea, &eb)
            })
        });
        in_perp && forms_match && self.psi_inverse(0) == Some(0)
    }

    /// Coordinates of `w ∈ t^⊥` modulo `t` in the `ψ` basis, as a bitmask over
    /// `0..2g`; `None` if `w ∉ t^⊥` or `ψ` is singular.
    pub fn psi_inverse(&self, w: u64) -> Option<u64> {
        if dot(w, self.t) != 0 {
            return None;
        }
        // columns psi[0..2g], t; eliminate over F_2 with combination masks
        let mut rows: Vec<(u64, u64)> = Vec::new();
        let cols = self.psi.iter().copied().chain(std::iter::once(self.t));
        for (j, v) in cols.enumerate() {
            let (mut v, mut tag) = (v, 1u64 << j);
            for &(rv, rt) in &rows {
                if v & (1 << rv.trailing_zeros()) != 0 {
                    v ^= rv;
                    tag ^= rt;
                }
            }
            if v == 0 {
                return None;
            }
            rows.push((v, tag));
        }
        let (mut r, mut tag) = (w, 0u64);
        for &(rv, rt) in &rows {
            if r & (1 << rv.trailing_zeros()) != 0 {
                r ^= rv;
                tag ^= rt;
            }
        }
        (r == 0).then_some(tag & bits_upto(2 * self.g))
    }

    /// `σ` acting on `M` through `ψ`: column `j` is `ψ^{-1}(σ·ψ(u_j))`.
    pub fn direct_action(&self, sigma: &Permutation) -> Result<MatMod, EmbedError> {
        if sigma.degree() != self.letters() {
            return Err(EmbedError::Degree {
                expected: self.letters(),
                got: sigma.degree(),
            });
        }
        let n = 2 * self.g;
        let mut cols = Vec::with_capacity(n);
        for &v in &self.psi {
            let mut w = 0u64;
            for i in 0..self.letters() {
                if v >> i & 1 == 1 {
                    w |= 1 << sigma.apply(i);
                }
            }
            cols.push(self.psi_inverse(w).expect("permutations preserve t^⊥"));
        }
        Ok(MatMod::from_fn(2, n, |r, c| cols[c] >> r & 1))
    }
}

/// `T_k`, the image of `(k, k+1)`, for `1 <= k <= 2g+1`.
pub fn transposition_matrix(g: usize, k: usize) -> Result<MatMod, EmbedError> {
    if k == 0 || k > 2 * g + 1 {
        return Err(EmbedError::TranspositionIndex { k, max: 2 * g + 1 });
    }
    let id = MatMod::identity(2, 2 * g);
    let n = k / 2;
    let m = if k.is_multiple_of(2) {
        tensor(2, [[1, 1], [1, 1]], &y_unit(g, n, n))
    } else {
        tensor(2, x_unit(1, 2), &y_block(g, &[n, n + 1]))
    };
    Ok(id.add(&m))
}

/// `Σ y_{ab}` over `a, b` in `idx`, dropping out-of-range indices.
fn y_block(g: usize, idx: &[usize]) -> Vec<Vec<i64>> {
    let mut y = vec![vec![0; g]; g];
    for &a in idx.iter().filter(|&&a| (1..=g).contains(&a)) {
        for &b in idx.iter().filter(|&&b| (1..=g).contains(&b)) {
            y[a - 1][b - 1] = 1;
        }
    }
    y
}

/// `Σ y_{ab}` over the listed pairs, dropping out-of-range indices.
fn y_sum(g: usize, pairs: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut y = vec![vec![0; g]; g];
    for &(a, b) in pairs {
        if (1..=g).contains(&a) && (1..=g).contains(&b) {
            y[a - 1][b - 1] += 1;
        }
    }
    y
}

/// Outcome of checking the Coxeter relations of `S_{2g+2}` on `T_1, …, T_{2g+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub g: usize,
    pub involutions: bool,
    pub braids: bool,
    pub commuting: bool,
    pub multiplier_one: bool,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.involutions && self.braids && self.commuting && self.multiplier_one
    }
}

/// `T_k² = 1`, `T_k T_{k+1} T_k = T_{k+1} T_k T_{k+1}`, `T_i T_j = T_j T_i` for
/// `|i - j| >= 2`, and every `T_k` has multiplier 1.
pub fn check_relations(g: usize) -> Result<RelationReport, EmbedError> {
    let form = SympForm::adjacent_pairs(g, 2);
    let ts = (1..=2 * g + 1)
        .map(|k| transposition_matrix(g, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = RelationReport {
        g,
        involutions: true,
        braids: true,
        commuting: true,
        multiplier_one: true,
    };
    for (i, a) in ts.iter().enumerate() {
        rep.involutions &= a.mul(a).is_identity();
        rep.multiplier_one &= form.multiplier(a) == Ok(1);
        for (j, b) in ts.iter().enumerate().skip(i + 1) {
            if j == i + 1 {
                rep.braids &= a.mul(b).mul(a) == b.mul(a).mul(b);
            } else {
                rep.commuting &= a.mul(b) == b.mul(a);
            }
        }
    }
    Ok(rep)
}

/// Product of `T_k` along the adjacent-transposition decomposition of `σ`.
pub fn embed_permutation(g: usize, sigma: &Permutation) -> Result<MatMod, EmbedError> {
    if sigma.degree() != 2 * g + 2 {
        return Err(EmbedError::Degree {
            expected: 2 * g + 2,
            got: sigma.degree(),
        });
    }
    let mut acc = MatMod::identity(2, 2 * g);
    for k in sigma.adjacent_decomposition() {
        acc = acc.mul(&transposition_matrix(g, k)?);
    }
    Ok(acc)
}

/// One targeted check of the conjugation-span argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub family: String,
    pub n: usize,
    pub l: Option<usize>,
    /// `Λ + T_k Λ T_k` equals the closed formula.
    pub formula_ok: bool,
    /// The extracted basis vector lies in the computed span.
    pub target_in_span: bool,
    /// Formula minus target lies in the span of basis vectors established earlier.
    pub residual_ok: bool,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.formula_ok && self.target_in_span && self.residual_ok
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub span: SpanReport,
    pub witnesses: Vec<WitnessCheck>,
    /// Dimension reached by the basis vectors established through the witnesses.
    pub replay_dim: usize,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.span.outcome == crate::symplectic::SpanOutcome::Equal
            && self.witnesses.iter().all(WitnessCheck::passed)
            && self.replay_dim == self.span.target_dim
    }
}

type X = [[i64; 2]; 2];

const ALL_ONES: X = [[1, 1], [1, 1]];

fn xmul(a: X, b: X) -> X {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// `Λ + T Λ T` over `F_2` (`T` is an involution).
fn conjugation_sum(lambda: &MatMod, t: &MatMod) -> MatMod {
    lambda.add(&t.mul(lambda).mul(t))
}

/// Bookkeeping for the constructive replay: each target joins `established`
/// after its residual has been checked against what came before.
struct Replay<'a> {
    span: &'a Span,
    witnesses: Vec<WitnessCheck>,
    established: Span,
}

impl Replay<'_> {
    fn record(
        &mut self,
        family: &str,
        n: usize,
        l: Option<usize>,
        raw: MatMod,
        formula: MatMod,
        target: MatMod,
    ) {
        let residual = formula.sub(&target);
        self.witnesses.push(WitnessCheck {
            family: family.to_string(),
            n,
            l,
            formula_ok: raw == formula,
            target_in_span: self.span.contains(target.entries()),
            residual_ok: self.established.contains(residual.entries()),
        });
        self.established.insert(target.entries());
    }
}

/// Span of `Λ + T_k Λ T_k` over a `gsp` basis and `k ∈ 1..=2g` (the copy of
/// `S_{2g+1}` fixing the last letter), with a replay of the inductive argument.
pub fn conjugation_span_check(g: usize) -> Result<ConjugationReport, EmbedError> {
    if !(2..=31).contains(&g) {
        return Err(EmbedError::Genus(g));
    }
    let form = SympForm::adjacent_pairs(g, 2);
    let basis = gsp_basis(g, 2).expect("2 is prime");
    let ts: Vec<MatMod> = (1..=2 * g)
        .map(|k| transposition_matrix(g, k))
        .collect::<Result<_, _>>()?;
    let mut span = Span::new(2, 4 * g * g);
    let mut inside_sp = true;
    for b in &basis {
        for t in &ts {
            let v = conjugation_sum(&b.element.matrix, t);
            inside_sp &= form.lie_membership(&v) == LieClass::Sp;
            span.insert(v.entries());
        }
    }
    let report = span_report(g, 2, &span, inside_sp);

    let mut replay = Replay {
        span: &span,
        witnesses: Vec::new(),
        established: Span::new(2, 4 * g * g),
    };
    let tk = |k: usize| &ts[k - 1];
    let t = |x: X, y: Vec<Vec<i64>>| tensor(2, x, &y);
    let x11_id = t(x_unit(1, 1), y_identity(g));

    for n in 1..=g {
        let ynn = y_unit(g, n, n);
        replay.record(
            "jc1",
            n,
            None,
            conjugation_sum(&x11_id, tk(2 * n)),
            t([[1, 0], [0, 1]], ynn.clone()),
            t([[1, 0], [0, 1]], ynn.clone()),
        );
        replay.record(
            "jc2",
            n,
            None,
            conjugation_sum(&x11_id, tk(2 * n - 1)),
            t(
                x_unit(1, 2),
                y_sum(g, &[(n - 1, n - 1), (n - 1, n), (n, n - 1), (n, n)]),
            ),
            t(x_unit(1, 2), ynn.clone()),
        );
        replay.record(
            "jc9",
            n,
            None,
            conjugation_sum(&t(x_unit(1, 2), ynn.clone()), tk(2 * n)),
            t(x_add(x_unit(1, 2), x_unit(2, 1)), ynn.clone()),
            t(x_unit(2, 1), ynn.clone()),
        );
        for l in n + 1..=g {
            let pair = |mm: X| t(mm, y_unit(g, n, l)).add(&t(phi(mm), y_unit(g, l, n)));
            let jc5 = |mm: X| {
                t(xmul(ALL_ONES, mm), y_unit(g, n, l))
                    .add(&t(xmul(phi(mm), ALL_ONES), y_unit(g, l, n)))
            };
            let jc3 = |mm: X| {
                t(xmul(x_unit(1, 2), mm), y_sum(g, &[(n, l), (n - 1, l)])).add(&t(
                    xmul(phi(mm), x_unit(1, 2)),
                    y_sum(g, &[(l, n), (l, n - 1)]),
                ))
            };
            let raw5 = |mm: X| conjugation_sum(&pair(mm), tk(2 * n));
            let raw3 = |mm: X| conjugation_sum(&pair(mm), tk(2 * n - 1));
            // the general identities, checked on the basis x_ab of 2x2 matrices
            for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let mm = x_unit(a, b);
                for (family, raw, formula) in
                    [("jc5", raw5(mm), jc5(mm)), ("jc3", raw3(mm), jc3(mm))]
                {
                    replay.witnesses.push(WitnessCheck {
                        family: format!("{family}[x{a}{b}]"),
                        n,
                        l: Some(l),
                        formula_ok: raw == formula,
                        target_in_span: span.contains(raw.entries()),
                        residual_ok: true,
                    });
                }
            }
            let (x11, x12, x21, x22) = (x_unit(1, 1), x_unit(1, 2), x_unit(2, 1), x_unit(2, 2));
            replay.record("jc4", n, Some(l), raw3(x22), jc3(x22), pair(x12));
            replay.record("jc8", n, Some(l), raw3(x21), jc3(x21), pair(x11));
            replay.record("jc6", n, Some(l), raw5(x11), jc5(x11), pair(x21));
            replay.record("jc7", n, Some(l), raw5(x22), jc5(x22), pair(x22));
        }
    }
    // the established vectors are exactly the sp basis
    let sp = sp_basis(g, 2).expect("2 is prime");
    let replay_dim = if sp
        .iter()
        .all(|b| replay.established.contains(b.element.matrix.entries()))
    {
        replay.established.dim()
    } else {
        0
    };
    Ok(ConjugationReport {
        span: report,
        witnesses: replay.witnesses,
        replay_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn psi_examples() {
        let e = EmbeddingData::new(2).unwrap();
        assert_eq!(e.psi[tensor_index(1, 1)], 0b11);
        assert_eq!(e.psi[tensor_index(2, 1)], 0b101);
        assert_eq!(e.psi_inverse(e.t), Some(0));
        for g in 1..=8 {
            assert!(
                EmbeddingData::new(g).unwrap().verify_intertwining(),
                "g={g}"
            );
        }
    }

    #[test]
    fn transposition_boundary_cases() {
        let g = 2;
        let t1 = transposition_matrix(g, 1).unwrap();
        let expect = MatMod::identity(2, 4).add(&tensor(2, x_unit(1, 2), &y_unit(g, 1, 1)));
        assert_eq!(t1, expect);
        let t5 = transposition_matrix(g, 5).unwrap();
        let expect = MatMod::identity(2, 4).add(&tensor(2, x_unit(1, 2), &y_unit(g, 2, 2)));
        assert_eq!(t5, expect);
        assert!(transposition_matrix(g, 6).is_err());
        assert!(transposition_matrix(g, 0).is_err());
    }

    #[test]
    fn coxeter_relations_and_symplecticity() {
        for g in 2..=6 {
            let form = SympForm::adjacent_pairs(g, 2);
            let ts: Vec<MatMod> = (1..=2 * g + 1)
                .map(|k| transposition_matrix(g, k).unwrap())
                .collect();
            for (i, a) in ts.iter().enumerate() {
                assert!(a.mul(a).is_identity());
                assert_eq!(form.multiplier(a), Ok(1));
                for (j, b) in ts.iter().enumerate() {
                    if i + 1 == j {
                        assert_eq!(a.mul(b).mul(a), b.mul(a).mul(b));
                    } else if i.abs_diff(j) >= 2 {
                        assert_eq!(a.mul(b), b.mul(a));
                    }
                }
            }
        }
    }

    #[test]
    fn transpositions_match_direct_action() {
        for g in 2..=6 {
            let e = EmbeddingData::new(g).unwrap();
            for k in 1..=2 * g + 1 {
                let sigma = Permutation::transposition(2 * g + 2, k, k + 1);
                assert_eq!(
                    e.direct_action(&sigma).unwrap(),
                    transposition_matrix(g, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for g in 2..=4 {
            let e = EmbeddingData::new(g).unwrap();
            let n = 2 * g + 2;
            let form = SympForm::adjacent_pairs(g, 2);
            assert!(embed_permutation(g, &Permutation::identity(n))
                .unwrap()
                .is_identity());
            for _ in 0..200 {
                let s = Permutation::random(n, &mut rng);
                let t = Permutation::random(n, &mut rng);
                let (ms, mt) = (
                    embed_permutation(g, &s).unwrap(),
                    embed_permutation(g, &t).unwrap(),
                );
                assert_eq!(embed_permutation(g, &s.compose(&t)).unwrap(), ms.mul(&mt));
                assert_eq!(e.direct_action(&s).unwrap(), ms);
                assert_eq!(form.multiplier(&ms), Ok(1));
            }
        }
    }

    #[test]
    fn decomposition_reassembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = Permutation::random(8, &mut rng);
            let back = s
                .adjacent_decomposition()
                .into_iter()
                .fold(Permutation::identity(8), |acc, k| {
                    acc.compose(&Permutation::transposition(8, k, k + 1))
                });
            assert_eq!(back, s);
        }
        let p = Permutation::from_one_based(&[2, 3, 1, 5, 4, 6]).unwrap();
        assert_eq!(p.cycle_type(), vec![3, 2, 1]);
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn conjugation_span_small() {
        for g in 2..=4 {
            let r = conjugation_span_check(g).unwrap();
            for w in &r.witnesses {
                assert!(w.passed(), "{w:?}");
            }
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.span.dim, 2 * g * g + g);
        }
    }
}
