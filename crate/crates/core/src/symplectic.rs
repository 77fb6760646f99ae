//! Symplectic forms over `Z/mZ`, similitude multipliers, the Lie algebras
//! `gsp_{2g}` and `sp_{2g}`, kernel layers, and span computations over `F_ℓ`.
//!
//! Two Gram matrices are used. The *block* form is `[[0, I], [-I, 0]]`. The
//! *adjacent-pairs* form pairs `e_{2k}` with `e_{2k+1}` (0-based), which is the
//! indexing in which the tensor notation `x_i ⊗ y_j ↦ e_{2j+i-2}` lives.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{bareiss_determinant, inv_mod, is_prime_u64};

/// Largest modulus accepted by [`MatMod`]; keeps every product inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SympError {
    #[error("modulus {0} outside 2..=2^32")]
    BadModulus(u64),
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not invertible modulo {0}")]
    NotInvertible(u64),
    #[error("matrix does not preserve the form up to a scalar")]
    NotSimilitude,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("genus must be at least 1")]
    BadGenus,
}

/// Square matrix over `Z/mZ`, row-major, entries in `[0, m)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatMod {
    m: u64,
    n: usize,
    entries: Vec<u64>,
}

impl fmt::Debug for MatMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatMod(mod {}, {}x{})", self.m, self.n, self.n)?;
        for r in 0..self.n {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

fn check_modulus(m: u64) -> Result<(), SympError> {
    if !(2..=MAX_MODULUS).contains(&m) {
        return Err(SympError::BadModulus(m));
    }
    Ok(())
}

impl MatMod {
    /// Build from row-major signed entries (reduced into `[0, m)`).
    pub fn new(m: u64, n: usize, entries: &[i64]) -> Result<Self, SympError> {
        check_modulus(m)?;
        if entries.len() != n * n {
            return Err(SympError::Shape {
                expected: n * n,
                got: entries.len(),
            });
        }
        let entries = entries
            .iter()
            .map(|&e| e.rem_euclid(m as i64) as u64)
            .collect();
        Ok(MatMod { m, n, entries })
    }

    pub fn from_fn(m: u64, n: usize, f: impl Fn(usize, usize) -> u64) -> Self {
        assert!((2..=MAX_MODULUS).contains(&m), "modulus out of range");
        let entries = (0..n * n).map(|k| f(k / n, k % n) % m).collect();
        MatMod { m, n, entries }
    }

    pub fn zero(m: u64, n: usize) -> Self {
        Self::from_fn(m, n, |_, _| 0)
    }

    pub fn identity(m: u64, n: usize) -> Self {
        Self::from_fn(m, n, |i, j| (i == j) as u64)
    }

    /// Unit matrix `E_{ij}`.
    pub fn unit(m: u64, n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(m, n, |r, c| (r == i && c == j) as u64)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.n + j] = v % self.m;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.m, self.n)
    }

    fn compatible(&self, other: &MatMod) {
        assert_eq!(self.m, other.m, "moduli differ");
        assert_eq!(self.n, other.n, "dimensions differ");
    }

    pub fn add(&self, other: &MatMod) -> MatMod {
        self.compatible(other);
        let m = self.m;
        MatMod {
            m,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + b) % m)
                .collect(),
        }
    }

    pub fn sub(&self, other: &MatMod) -> MatMod {
        self.compatible(other);
        let m = self.m;
        MatMod {
            m,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + m - b) % m)
                .collect(),
        }
    }

    pub fn scale(&self, c: u64) -> MatMod {
        let m = self.m;
        let c = c % m;
        MatMod {
            m,
            n: self.n,
            entries: self.entries.iter().map(|a| a * c % m).collect(),
        }
    }

    pub fn mul(&self, other: &MatMod) -> MatMod {
        self.compatible(other);
        let (m, n) = (self.m, self.n);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out[idx] = ((out[idx] as u128 + a as u128 * other.entries[k * n + j] as u128)
                        % m as u128) as u64;
                }
            }
        }
        MatMod { m, n, entries: out }
    }

    pub fn pow(&self, mut e: u64) -> MatMod {
        let mut base = self.clone();
        let mut acc = Self::identity(self.m, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> MatMod {
        Self::from_fn(self.m, self.n, |i, j| self.get(j, i))
    }

    /// Lie bracket `AB - BA`.
    pub fn bracket(&self, other: &MatMod) -> MatMod {
        self.mul(other).sub(&other.mul(self))
    }

    /// Reduce to a divisor `d` of the modulus.
    pub fn reduce(&self, d: u64) -> MatMod {
        assert!(
            d >= 2 && self.m.is_multiple_of(d),
            "{d} does not divide {}",
            self.m
        );
        Self::from_fn(d, self.n, |i, j| self.get(i, j))
    }

    /// Entrywise lift to a larger modulus using representatives in `[0, m)`.
    pub fn lift_to(&self, m: u64) -> MatMod {
        Self::from_fn(m, self.n, |i, j| self.get(i, j))
    }

    /// Determinant modulo `m`, via fraction-free elimination over `Z`.
    pub fn det(&self) -> u64 {
        let rows = (0..self.n)
            .map(|i| self.row(i).iter().map(|&e| BigInt::from(e)).collect())
            .collect();
        let d = bareiss_determinant(rows);
        let m = BigInt::from(self.m);
        (((d % &m) + &m) % &m).to_u64().expect("reduced residue")
    }

    /// Inverse by Gauss–Jordan with unit pivots. Complete for prime-power moduli,
    /// where a column of an invertible matrix always contains a unit.
    pub fn inverse(&self) -> Result<MatMod, SympError> {
        let (m, n) = (self.m, self.n);
        let mut a = self.clone();
        let mut inv = Self::identity(m, n);
        for col in 0..n {
            let (piv, pinv) = (col..n)
                .find_map(|r| inv_mod(a.get(r, col), m).map(|u| (r, u)))
                .ok_or(SympError::NotInvertible(m))?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            a.scale_row(col, pinv);
            inv.scale_row(col, pinv);
            for r in 0..n {
                let c = a.get(r, col);
                if r != col && c != 0 {
                    a.add_row_multiple(r, col, m - c);
                    inv.add_row_multiple(r, col, m - c);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.entries.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        let m = self.m;
        for j in 0..self.n {
            let e = &mut self.entries[r * self.n + j];
            *e = *e * c % m;
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: u64) {
        let m = self.m;
        for j in 0..self.n {
            let s = self.entries[src * self.n + j];
            let e = &mut self.entries[dst * self.n + j];
            *e = (*e + c * s % m) % m;
        }
    }

    /// Matrix-vector product (column convention).
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.n)
            .map(|i| {
                self.row(i).iter().zip(v).fold(0u64, |acc, (&a, &b)| {
                    (acc + a * (b % self.m) % self.m) % self.m
                })
            })
            .collect()
    }
}

/// Which of the two standard Gram matrices a form is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    Block,
    AdjacentPairs,
}

/// Nondegenerate alternating form on `(Z/m)^{2g}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SympForm {
    g: usize,
    kind: FormKind,
    gram: MatMod,
}

impl SympForm {
    /// `[[0, I_g], [-I_g, 0]]`
    pub fn block(g: usize, m: u64) -> Self {
        let gram = MatMod::from_fn(m, 2 * g, |i, j| {
            if j == i + g {
                1
            } else if i == j + g {
                m - 1
            } else {
                0
            }
        });
        SympForm {
            g,
            kind: FormKind::Block,
            gram,
        }
    }

    /// `⟨e_{2k}, e_{2k+1}⟩ = 1` (0-based), i.e. `id_g ⊗ [[0,1],[-1,0]]`.
    pub fn adjacent_pairs(g: usize, m: u64) -> Self {
        let gram = MatMod::from_fn(m, 2 * g, |i, j| {
            if i / 2 != j / 2 || i == j {
                0
            } else if i % 2 == 0 {
                1
            } else {
                m - 1
            }
        });
        SympForm {
            g,
            kind: FormKind::AdjacentPairs,
            gram,
        }
    }

    pub fn new(g: usize, m: u64, kind: FormKind) -> Self {
        match kind {
            FormKind::Block => Self::block(g, m),
            FormKind::AdjacentPairs => Self::adjacent_pairs(g, m),
        }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.gram.m
    }

    pub fn gram(&self) -> &MatMod {
        &self.gram
    }

    pub fn pair(&self, u: &[u64], v: &[u64]) -> u64 {
        let w = self.gram.apply(v);
        let m = self.modulus();
        u.iter()
            .zip(&w)
            .fold(0, |acc, (&a, &b)| (acc + a % m * b) % m)
    }

    /// Permutation matrix `P` with `P^T Ω_to P = Ω_from`; block basis vector
    /// `e_i` goes to `e_{2i}` and `e_{g+i}` to `e_{2i+1}`.
    pub fn change_of_basis(g: usize, m: u64, from: FormKind, to: FormKind) -> MatMod {
        let to_adjacent = |c: usize| if c < g { 2 * c } else { 2 * (c - g) + 1 };
        match (from, to) {
            (FormKind::Block, FormKind::AdjacentPairs) => {
                MatMod::from_fn(m, 2 * g, |r, c| (r == to_adjacent(c)) as u64)
            }
            (FormKind::AdjacentPairs, FormKind::Block) => {
                MatMod::from_fn(m, 2 * g, |r, c| (c == to_adjacent(r)) as u64)
            }
            _ => MatMod::identity(m, 2 * g),
        }
    }

    /// Rewrite a matrix given relative to `self` in the coordinates of `target`.
    pub fn transport(&self, s: &MatMod, target: FormKind) -> MatMod {
        let p = Self::change_of_basis(self.g, self.modulus(), self.kind, target);
        let pinv = Self::change_of_basis(self.g, self.modulus(), target, self.kind);
        p.mul(s).mul(&pinv)
    }

    /// The scalar `c` with `A = c·Ω`, if one exists.
    fn scalar_multiple(&self, a: &MatMod) -> Option<u64> {
        // Ω has a ±1 at (0, j0) in both standard forms
        let j0 = (0..self.gram.n).find(|&j| self.gram.get(0, j) != 0)?;
        let c = a.get(0, j0) * self.gram.get(0, j0) % self.modulus();
        (self.gram.scale(c) == *a).then_some(c)
    }

    /// `m_S` with `S^T Ω S = m_S Ω`.
    pub fn multiplier(&self, s: &MatMod) -> Result<u64, SympError> {
        self.check(s)?;
        let a = s.transpose().mul(&self.gram).mul(s);
        let c = self.scalar_multiple(&a).ok_or(SympError::NotSimilitude)?;
        if inv_mod(c, self.modulus()).is_none() {
            return Err(SympError::NotInvertible(self.modulus()));
        }
        Ok(c)
    }

    pub fn is_symplectic(&self, s: &MatMod) -> bool {
        self.multiplier(s) == Ok(1)
    }

    /// Classify `Λ` by `Λ^T Ω + Ω Λ = d Ω`.
    pub fn lie_membership(&self, lambda: &MatMod) -> LieClass {
        if self.check(lambda).is_err() {
            return LieClass::Neither;
        }
        let a = lambda
            .transpose()
            .mul(&self.gram)
            .add(&self.gram.mul(lambda));
        match self.scalar_multiple(&a) {
            Some(0) => LieClass::Sp,
            Some(d) => LieClass::Gsp { d },
            None => LieClass::Neither,
        }
    }

    fn check(&self, s: &MatMod) -> Result<(), SympError> {
        if s.m != self.modulus() {
            return Err(SympError::ModulusMismatch(s.m, self.modulus()));
        }
        if s.n != 2 * self.g {
            return Err(SympError::DimensionMismatch(s.n, 2 * self.g));
        }
        Ok(())
    }
}

/// Result of [`SympForm::lie_membership`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum LieClass {
    Sp,
    Gsp { d: u64 },
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Sp,
    Gsp,
}

/// Element of `gsp_{2g}(Z/m)` with its scalar `d` (zero for `sp`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    pub matrix: MatMod,
    pub flavor: Flavor,
    pub d: u64,
}

impl LieElement {
    /// Classify a matrix against the adjacent-pairs form.
    pub fn classify(matrix: MatMod) -> Option<LieElement> {
        let g = matrix.dim() / 2;
        match SympForm::adjacent_pairs(g, matrix.modulus()).lie_membership(&matrix) {
            LieClass::Sp => Some(LieElement {
                matrix,
                flavor: Flavor::Sp,
                d: 0,
            }),
            LieClass::Gsp { d } => Some(LieElement {
                matrix,
                flavor: Flavor::Gsp,
                d,
            }),
            LieClass::Neither => None,
        }
    }
}

// ---------------------------------------------------------------------------
// tensor notation, adjacent-pairs indexing

/// Index of `x_i ⊗ y_a` (1-based `i ∈ {1,2}`, `a ∈ 1..=g`) as a 0-based coordinate.
#[inline]
pub fn tensor_index(i: usize, a: usize) -> usize {
    2 * (a - 1) + (i - 1)
}

/// `X ⊗ Y` for a 2×2 `X` and g×g `Y` given as signed entries.
pub fn tensor(m: u64, x: [[i64; 2]; 2], y: &[Vec<i64>]) -> MatMod {
    let g = y.len();
    MatMod::from_fn(m, 2 * g, |r, c| {
        let v = x[r % 2][c % 2] * y[r / 2][c / 2];
        v.rem_euclid(m as i64) as u64
    })
}

/// `x_{ij}` as a 2×2 array (1-based).
pub fn x_unit(i: usize, j: usize) -> [[i64; 2]; 2] {
    let mut x = [[0; 2]; 2];
    x[i - 1][j - 1] = 1;
    x
}

/// `y_{ab}` as a g×g array (1-based).
pub fn y_unit(g: usize, a: usize, b: usize) -> Vec<Vec<i64>> {
    let mut y = vec![vec![0; g]; g];
    y[a - 1][b - 1] = 1;
    y
}

pub fn y_identity(g: usize) -> Vec<Vec<i64>> {
    (0..g)
        .map(|a| (0..g).map(|b| (a == b) as i64).collect())
        .collect()
}

pub fn x_add(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn x_neg(a: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]]
}

/// `φ(M) = J M^T J` on 2×2 blocks: the partner making `M⊗y_ij + φ(M)⊗y_ji` lie in `sp`.
pub fn phi(a: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    // φ(x11) = -x22, φ(x22) = -x11, φ(x12) = x12, φ(x21) = x21
    [[-a[1][1], a[0][1]], [a[1][0], -a[0][0]]]
}

/// A labelled basis vector of `sp` or `gsp`.
#[derive(Clone, Debug)]
pub struct BasisElement {
    pub element: LieElement,
    /// The `i` of the `y_{ij}` / `y_{ii}` factor (1-based).
    pub ind: usize,
    pub label: String,
}

/// Basis of `sp_{2g}(Z/ℓ)` of size `2g²+g` in tensor notation. Over `F_2` the
/// diagonal entries `(x11-x22)⊗y_ii` coincide with `id_2⊗y_ii`.
pub fn sp_basis(g: usize, ell: u64) -> Result<Vec<BasisElement>, SympError> {
    if !is_prime_u64(ell) {
        return Err(SympError::NotPrime(ell));
    }
    if g == 0 {
        return Err(SympError::BadGenus);
    }
    let mut out = Vec::with_capacity(2 * g * g + g);
    let mut push = |matrix: MatMod, ind: usize, label: String| {
        out.push(BasisElement {
            element: LieElement {
                matrix,
                flavor: Flavor::Sp,
                d: 0,
            },
            ind,
            label,
        });
    };
    let h = x_add(x_unit(1, 1), x_neg(x_unit(2, 2)));
    for i in 1..=g {
        let y = y_unit(g, i, i);
        let diag_label = if ell == 2 { "id2" } else { "(x11-x22)" };
        push(tensor(ell, h, &y), i, format!("{diag_label}⊗y{i}{i}"));
        push(tensor(ell, x_unit(1, 2), &y), i, format!("x12⊗y{i}{i}"));
        push(tensor(ell, x_unit(2, 1), &y), i, format!("x21⊗y{i}{i}"));
    }
    for i in 1..=g {
        for j in i + 1..=g {
            for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let mm = x_unit(a, b);
                let mat =
                    tensor(ell, mm, &y_unit(g, i, j)).add(&tensor(ell, phi(mm), &y_unit(g, j, i)));
                push(mat, i, format!("x{a}{b}⊗y{i}{j}+φ(x{a}{b})⊗y{j}{i}"));
            }
        }
    }
    Ok(out)
}

/// `sp_basis` extended by `x11 ⊗ id_g` (scalar `d = 1`), a basis of `gsp_{2g}(Z/ℓ)`.
pub fn gsp_basis(g: usize, ell: u64) -> Result<Vec<BasisElement>, SympError> {
    let mut basis = sp_basis(g, ell)?;
    basis.push(BasisElement {
        element: LieElement {
            matrix: tensor(ell, x_unit(1, 1), &y_identity(g)),
            flavor: Flavor::Gsp,
            d: 1,
        },
        ind: 0,
        label: "x11⊗id".to_string(),
    });
    Ok(basis)
}

// ---------------------------------------------------------------------------
// linear algebra over F_ℓ

/// Row-echelon span over `F_ℓ` with first-nonzero pivots, rows normalised to
/// leading 1 and kept sorted by pivot column.
#[derive(Clone, Debug)]
pub struct Span {
    ell: u64,
    len: usize,
    rows: BTreeMap<usize, Vec<u64>>,
}

impl Span {
    pub fn new(ell: u64, len: usize) -> Self {
        Span {
            ell,
            len,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    /// Residue of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.len);
        let p = self.ell;
        let mut w: Vec<u64> = v.iter().map(|x| x % p).collect();
        for (&piv, row) in &self.rows {
            let c = w[piv];
            if c != 0 {
                let f = p - c;
                for (wi, ri) in w.iter_mut().zip(row).skip(piv) {
                    *wi = (*wi + f * ri) % p;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[piv], self.ell).expect("prime modulus");
        for x in w.iter_mut() {
            *x = *x * inv % self.ell;
        }
        self.rows.insert(piv, w);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }
}

/// Outcome of comparing a computed span with `sp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanOutcome {
    Equal,
    Proper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub g: usize,
    pub ell: u64,
    pub outcome: SpanOutcome,
    pub dim: usize,
    pub target_dim: usize,
    /// Every spanning vector was checked to lie in `sp`.
    pub inside_sp: bool,
}

/// Span of `[B_i, B_j]` over a basis of `gsp_{2g}(F_ℓ)`, compared with `sp_{2g}(F_ℓ)`.
pub fn commutator_span_check(g: usize, ell: u64) -> Result<SpanReport, SympError> {
    let basis = gsp_basis(g, ell)?;
    let form = SympForm::adjacent_pairs(g, ell);
    let mut span = Span::new(ell, 4 * g * g);
    let mut inside_sp = true;
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            let c = a.element.matrix.bracket(&b.element.matrix);
            inside_sp &= form.lie_membership(&c) == LieClass::Sp;
            span.insert(c.entries());
        }
    }
    Ok(span_report(g, ell, &span, inside_sp))
}

pub(crate) fn span_report(g: usize, ell: u64, span: &Span, inside_sp: bool) -> SpanReport {
    let target_dim = 2 * g * g + g;
    let outcome = if inside_sp && span.dim() == target_dim {
        SpanOutcome::Equal
    } else {
        SpanOutcome::Proper
    };
    SpanReport {
        g,
        ell,
        outcome,
        dim: span.dim(),
        target_dim,
        inside_sp,
    }
}

/// `id + ℓ^k Λ` modulo `ℓ^{k+1}`, with `Λ` read through representatives in `[0, ℓ)`.
pub fn lift_layer(lambda: &MatMod, ell: u64, k: u32) -> MatMod {
    let big = ell.pow(k + 1);
    let step = ell.pow(k);
    let n = lambda.dim();
    MatMod::from_fn(big, n, |i, j| {
        ((i == j) as u64 + step * lambda.get(i, j)) % big
    })
}

/// `|Sp_{2g}(F_ℓ)| = ℓ^{g²} ∏_{i=1}^{g} (ℓ^{2i} - 1)`.
pub fn sp_order_prime(g: usize, ell: u64) -> BigUint {
    let l = BigUint::from(ell);
    let mut acc = l.pow((g * g) as u32);
    for i in 1..=g {
        acc *= l.pow(2 * i as u32) - BigUint::one();
    }
    acc
}

/// `|Sp_{2g}(Z/ℓ^k)| = |Sp_{2g}(F_ℓ)| · ℓ^{(k-1)(2g²+g)}`.
pub fn sp_order(g: usize, ell: u64, k: u32) -> BigUint {
    assert!(k >= 1);
    sp_order_prime(g, ell) * BigUint::from(ell).pow((k - 1) * (2 * g * g + g) as u32)
}

/// `|Sp_{2g}(Z/2^k)|`.
pub fn group_order(g: usize, k: u32) -> BigUint {
    sp_order(g, 2, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random element of Sp by multiplying transvections `v ↦ v + c⟨v,u⟩u`.
    fn random_symplectic(form: &SympForm, rng: &mut ChaCha8Rng) -> MatMod {
        let m = form.modulus();
        let n = 2 * form.genus();
        let mut acc = MatMod::identity(m, n);
        for _ in 0..6 {
            let u: Vec<u64> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let c = rng.gen_range(0..m);
            // T(v) = v + c⟨v,u⟩u, ⟨v,u⟩ = v^T Ω u
            let omega_u = form.gram().apply(&u);
            let t = MatMod::from_fn(m, n, |i, j| {
                ((i == j) as u64 + c * u[i] % m * omega_u[j]) % m
            });
            acc = acc.mul(&t);
        }
        acc
    }

    fn scaling(g: usize, m: u64, alpha: u64) -> MatMod {
        // alternating 1, α on the diagonal: multiplier α in the adjacent-pairs form
        MatMod::from_fn(m, 2 * g, |i, j| {
            if i != j {
                0
            } else if i % 2 == 0 {
                1
            } else {
                alpha
            }
        })
    }

    #[test]
    fn multiplier_examples() {
        let form = SympForm::adjacent_pairs(3, 35);
        assert_eq!(form.multiplier(&MatMod::identity(35, 6)), Ok(1));
        assert_eq!(form.multiplier(&scaling(3, 35, 4)), Ok(4));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_symplectic(&form, &mut rng);
        assert_eq!(form.multiplier(&s), Ok(1));
        assert_eq!(
            form.multiplier(&MatMod::unit(35, 6, 0, 1)),
            Err(SympError::NotInvertible(35))
        );
        let shear = MatMod::identity(35, 6).add(&MatMod::unit(35, 6, 0, 2));
        assert_eq!(form.multiplier(&shear), Err(SympError::NotSimilitude));
    }

    #[test]
    fn lie_membership_examples() {
        for m in [2u64, 3, 8] {
            let form = SympForm::adjacent_pairs(2, m);
            assert_eq!(form.lie_membership(&MatMod::zero(m, 4)), LieClass::Sp);
            let expected = if m == 2 {
                LieClass::Sp
            } else {
                LieClass::Gsp { d: 2 }
            };
            assert_eq!(form.lie_membership(&MatMod::identity(m, 4)), expected);
            let x11 = tensor(m, x_unit(1, 1), &y_identity(2));
            assert_eq!(form.lie_membership(&x11), LieClass::Gsp { d: 1 });
            assert_eq!(
                form.lie_membership(&MatMod::unit(m, 4, 0, 2)),
                LieClass::Neither
            );
        }
    }

    #[test]
    fn change_of_basis_relates_forms() {
        for g in 1..5 {
            let block = SympForm::block(g, 9);
            let adj = SympForm::adjacent_pairs(g, 9);
            let p = SympForm::change_of_basis(g, 9, FormKind::Block, FormKind::AdjacentPairs);
            assert_eq!(p.transpose().mul(adj.gram()).mul(&p), *block.gram());
            let q = SympForm::change_of_basis(g, 9, FormKind::AdjacentPairs, FormKind::Block);
            assert!(p.mul(&q).is_identity());
            let s = scaling(g, 9, 5);
            let in_block = adj.transport(&s, FormKind::Block);
            assert_eq!(block.multiplier(&in_block), Ok(5));
        }
    }

    #[test]
    fn basis_sizes_and_membership() {
        for (g, ell) in [(2, 2), (3, 2), (2, 3), (4, 5)] {
            let basis = sp_basis(g, ell).unwrap();
            assert_eq!(basis.len(), 2 * g * g + g);
            let form = SympForm::adjacent_pairs(g, ell);
            let mut span = Span::new(ell, 4 * g * g);
            for b in &basis {
                assert_eq!(
                    form.lie_membership(&b.element.matrix),
                    LieClass::Sp,
                    "{}",
                    b.label
                );
                assert!(span.insert(b.element.matrix.entries()));
            }
        }
        assert_eq!(sp_basis(2, 2).unwrap().len(), 10);
        assert_eq!(sp_basis(3, 2).unwrap().len(), 21);
        assert!(sp_basis(2, 4).is_err());
    }

    #[test]
    fn commutator_span_small() {
        for (g, ell) in [(2, 2), (3, 2), (2, 3), (2, 5), (3, 3)] {
            let r = commutator_span_check(g, ell).unwrap();
            assert_eq!(r.outcome, SpanOutcome::Equal, "{r:?}");
            assert_eq!(r.dim, 2 * g * g + g);
        }
    }

    #[test]
    fn lift_layer_kernel_and_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = 2;
        let basis = sp_basis(g, 2).unwrap();
        let rand_lambda = |rng: &mut ChaCha8Rng| {
            basis.iter().fold(MatMod::zero(2, 4), |acc, b| {
                if rng.gen_bool(0.5) {
                    acc.add(&b.element.matrix)
                } else {
                    acc
                }
            })
        };
        assert!(lift_layer(&MatMod::zero(2, 4), 2, 1).is_identity());
        for k in 1..=2 {
            let form = SympForm::adjacent_pairs(g, 2u64.pow(k + 1));
            for _ in 0..20 {
                let l = rand_lambda(&mut rng);
                let lifted = lift_layer(&l, 2, k);
                assert_eq!(form.multiplier(&lifted), Ok(1));
                assert!(lifted.reduce(2u64.pow(k)).is_identity());
            }
        }
        // [id+2A, id+2B] = id + 4[A,B] mod 8 for integer lifts in gsp
        for _ in 0..100 {
            let mut rand8 = || {
                let e: Vec<i64> = (0..16).map(|_| rng.gen_range(0..8)).collect();
                MatMod::new(8, 4, &e).unwrap()
            };
            let (a, b) = (rand8(), rand8());
            let two_a = MatMod::identity(8, 4).add(&a.scale(2));
            let two_b = MatMod::identity(8, 4).add(&b.scale(2));
            let (Ok(ia), Ok(ib)) = (two_a.inverse(), two_b.inverse()) else {
                panic!()
            };
            let comm = two_a.mul(&two_b).mul(&ia).mul(&ib);
            let expect = MatMod::identity(8, 4).add(&a.bracket(&b).scale(4));
            assert_eq!(comm, expect);
        }
        // (id+2Λ)^{-1} M (id+2Λ) M^{-1} = id + 2(Λ + MΛM^{-1}) mod 4
        let t = tensor(4, [[1, 1], [1, 1]], &y_unit(g, 1, 1)).add(&MatMod::identity(4, 4));
        let tinv = t.inverse().unwrap();
        for _ in 0..50 {
            let l = rand_lambda(&mut rng).lift_to(4);
            let x = MatMod::identity(4, 4).add(&l.scale(2));
            let lhs = x.inverse().unwrap().mul(&t).mul(&x).mul(&tinv);
            let conj = t.mul(&l).mul(&tinv);
            let rhs = MatMod::identity(4, 4).add(&l.add(&conj).scale(2));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn multiplier_det_and_multiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (g, m) in [(2usize, 8u64), (3, 7), (2, 25)] {
            let form = SympForm::adjacent_pairs(g, m);
            for _ in 0..100 {
                let alpha = loop {
                    let a = rng.gen_range(1..m);
                    if inv_mod(a, m).is_some() {
                        break a;
                    }
                };
                let s = random_symplectic(&form, &mut rng).mul(&scaling(g, m, alpha));
                let t = scaling(g, m, 3).mul(&random_symplectic(&form, &mut rng));
                let (ms, mt) = (form.multiplier(&s).unwrap(), form.multiplier(&t).unwrap());
                assert_eq!(form.multiplier(&s.mul(&t)).unwrap(), ms * mt % m);
                let mut pow = 1;
                for _ in 0..g {
                    pow = pow * ms % m;
                }
                assert_eq!(s.det(), pow);
            }
        }
    }

    #[test]
    fn orders() {
        assert_eq!(group_order(2, 1), BigUint::from(720u32));
        assert_eq!(group_order(3, 1), BigUint::from(1451520u32));
        assert_eq!(group_order(2, 3), BigUint::from(720u64 << 20));
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let form = SympForm::block(3, 8);
        for _ in 0..20 {
            let s = random_symplectic(&form, &mut rng);
            assert!(s.mul(&s.inverse().unwrap()).is_identity());
        }
        assert!(MatMod::zero(8, 2).inverse().is_err());
    }
}
