//! Positive-boundary 2d TQFT from a commutative Frobenius algebra without
//! counit, with exact scalars.
//!
//! Operators act on tensor powers of `A` in the lexicographic basis: the
//! index of `e_{i1} ⊗ … ⊗ e_{ik}` is `i1·d^(k-1) + … + ik`. An operator
//! `A^⊗p → A^⊗q` is a `d^q × d^p` matrix.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::chord::ChordDiagram;
use crate::par::Executor;

/// Largest operator (rows × columns) [`mu`] will build.
pub const MAX_ENTRIES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TqftError {
    #[error(
        "no operation with zero outgoing circles: the theory has positive boundary only, and the \
         counit a closed outgoing disk would need does not exist in general"
    )]
    NoOutgoing,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("algebra has dimension 0")]
    EmptyBasis,
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("coefficient {0} is not defined in this field")]
    BadCoefficient(String),
    #[error("operator of size {rows}x{cols} exceeds the size cap")]
    TooLarge { rows: usize, cols: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, TqftError> {
        if p < 2 || p > u32::MAX as u64 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(TqftError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    pub fn rational(self, r: &BigRational) -> Option<Scalar> {
        match self {
            Field::Rationals => Some(Scalar::Q(r.clone())),
            Field::Prime(p) => {
                let reduce = |n: &BigInt| n.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                let num = Scalar::Fp {
                    value: reduce(r.numer()),
                    modulus: p,
                };
                let den = Scalar::Fp {
                    value: reduce(r.denom()),
                    modulus: p,
                };
                Some(&num * &den.inverse()?)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp {p}"),
        }
    }
}

/// Field element. Prime-field elements carry their modulus; mixing fields
/// in one operation is a bug and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Q(_) => s.serialize_str(&self.to_string()),
            Scalar::Fp { value, .. } => s.serialize_u64(*value),
        }
    }
}

fn fp_op(a: &Scalar, b: &Scalar, op: impl Fn(u128, u128, u128) -> u128) -> Scalar {
    match (a, b) {
        (Scalar::Fp { value: x, modulus: m }, Scalar::Fp { value: y, modulus: n }) if m == n => Scalar::Fp {
            value: op(*x as u128, *y as u128, *m as u128) as u64,
            modulus: *m,
        },
        _ => panic!("scalars from different fields: {a:?} and {b:?}"),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => fp_op(self, rhs, |x, y, m| (x + y) % m),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            _ => fp_op(self, rhs, |x, y, m| (x + m - y) % m),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => fp_op(self, rhs, |x, y, m| x * y % m),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

/// Dense matrix over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix shapes do not compose");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn tensor(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.to_rows();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = m[rank][col].inverse().unwrap();
            for r in 0..self.rows {
                if r != rank && !m[r][col].is_zero() {
                    let f = &m[r][col] * &inv;
                    for c in col..self.cols {
                        let t = &f * &m[rank][c];
                        m[r][c] = &m[r][c] - &t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// Solves `a · x = b` for one solution, or `None` if inconsistent.
fn solve(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<Scalar>> = (0..rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].inverse().unwrap();
        for c in col..=cols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let t = &f * &m[rank][c];
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if (rank..rows).any(|r| !m[r][cols].is_zero()) {
        return None;
    }
    let mut x = vec![a.field.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Integer grading: a degree per basis element and the ambient dimension n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub degrees: Vec<i64>,
    pub n: i64,
}

/// Commutative algebra with unit and cocommutative coproduct, given by
/// structure constants. Nothing here is assumed; [`check_axioms`] tests it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    field: Field,
    names: Vec<String>,
    grading: Option<Grading>,
    /// `product[(i*d + j)*d + k]` is the coefficient of `e_k` in `e_i·e_j`.
    product: Vec<Scalar>,
    /// `coproduct[(i*d + j)*d + k]` is the coefficient of `e_j⊗e_k` in `Δ(e_i)`.
    coproduct: Vec<Scalar>,
    unit: Vec<Scalar>,
}

impl FrobeniusAlgebra {
    /// All structure constants zero.
    pub fn new(field: Field, names: Vec<String>, grading: Option<Grading>) -> Result<Self, TqftError> {
        let d = names.len();
        if d == 0 {
            return Err(TqftError::EmptyBasis);
        }
        if let Some(g) = &grading {
            if g.degrees.len() != d {
                return Err(TqftError::LengthMismatch {
                    expected: d,
                    found: g.degrees.len(),
                });
            }
        }
        Ok(FrobeniusAlgebra {
            field,
            names,
            grading,
            product: vec![field.zero(); d * d * d],
            coproduct: vec![field.zero(); d * d * d],
            unit: vec![field.zero(); d],
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    fn check(&self, idx: &[usize]) -> Result<(), TqftError> {
        match idx.iter().find(|&&i| i >= self.dim()) {
            Some(&index) => Err(TqftError::IndexOutOfRange { index, dim: self.dim() }),
            None => Ok(()),
        }
    }

    fn slot(&self, i: usize, j: usize, k: usize) -> usize {
        let d = self.dim();
        (i * d + j) * d + k
    }

    pub fn product(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.product[self.slot(i, j, k)]
    }

    pub fn coproduct(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.coproduct[self.slot(i, j, k)]
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn set_product(&mut self, i: usize, j: usize, k: usize, v: Scalar) -> Result<(), TqftError> {
        self.check(&[i, j, k])?;
        let s = self.slot(i, j, k);
        self.product[s] = v;
        Ok(())
    }

    pub fn set_coproduct(&mut self, i: usize, j: usize, k: usize, v: Scalar) -> Result<(), TqftError> {
        self.check(&[i, j, k])?;
        let s = self.slot(i, j, k);
        self.coproduct[s] = v;
        Ok(())
    }

    pub fn set_unit(&mut self, unit: Vec<Scalar>) -> Result<(), TqftError> {
        if unit.len() != self.dim() {
            return Err(TqftError::LengthMismatch {
                expected: self.dim(),
                found: unit.len(),
            });
        }
        self.unit = unit;
        Ok(())
    }

    /// `d × d²`
    pub fn product_matrix(&self) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(self.field, d, d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    m.set(k, i * d + j, self.product(i, j, k).clone());
                }
            }
        }
        m
    }

    /// `d² × d`
    pub fn coproduct_matrix(&self) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(self.field, d * d, d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    m.set(j * d + k, i, self.coproduct(i, j, k).clone());
                }
            }
        }
        m
    }

    /// `d × 1`
    pub fn unit_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim(), 1);
        for (i, u) in self.unit.iter().enumerate() {
            m.set(i, 0, u.clone());
        }
        m
    }

    /// Multiplication by `e_a`, as a `d × d` matrix.
    pub fn left_multiplication(&self, a: usize) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(self.field, d, d);
        for j in 0..d {
            for k in 0..d {
                m.set(k, j, self.product(a, j, k).clone());
            }
        }
        m
    }

    /// The handle operator `m ∘ Δ`.
    pub fn handle(&self) -> Matrix {
        self.product_matrix().compose(&self.coproduct_matrix())
    }

    fn basis_vector(&self, i: usize) -> Matrix {
        let mut v = Matrix::zeros(self.field, self.dim(), 1);
        v.set(i, 0, self.field.one());
        v
    }
}

pub mod builtins {
    //! The algebras shipped with the library.

    use super::*;

    fn rank_two(field: Field, grading: Option<Grading>) -> FrobeniusAlgebra {
        let mut a = FrobeniusAlgebra::new(field, vec!["1".into(), "x".into()], grading).unwrap();
        let one = field.one();
        // 1 is the unit, x² = 0.
        a.set_product(0, 0, 0, one.clone()).unwrap();
        a.set_product(0, 1, 1, one.clone()).unwrap();
        a.set_product(1, 0, 1, one.clone()).unwrap();
        a.set_unit(vec![one, field.zero()]).unwrap();
        a
    }

    /// `{1, x}`, `x² = 0`, `Δ1 = 1⊗x + x⊗1`, `Δx = x⊗x`.
    pub fn pd2(field: Field) -> FrobeniusAlgebra {
        let mut a = rank_two(field, None);
        a.set_coproduct(0, 0, 1, field.one()).unwrap();
        a.set_coproduct(0, 1, 0, field.one()).unwrap();
        a.set_coproduct(1, 1, 1, field.one()).unwrap();
        a
    }

    /// `{1, x}` graded with `|1| = 2`, `|x| = 0`, `n = 2`; `x² = 0`,
    /// `Δ1 = x⊗x`, `Δx = 0`.
    pub fn st2(field: Field) -> FrobeniusAlgebra {
        let mut a = rank_two(
            field,
            Some(Grading {
                degrees: vec![2, 0],
                n: 2,
            }),
        );
        a.set_coproduct(0, 1, 1, field.one()).unwrap();
        a
    }

    /// The product of PD2 with zero coproduct.
    pub fn zero_coproduct(field: Field) -> FrobeniusAlgebra {
        rank_two(field, None)
    }

    pub fn by_name(name: &str, field: Field) -> Option<FrobeniusAlgebra> {
        match name {
            "pd2" => Some(pd2(field)),
            "st2" => Some(st2(field)),
            "zero" => Some(zero_coproduct(field)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    /// Basis elements on which the identity fails.
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

/// Finds the first index tuple on which `ok` fails.
fn first_failure(d: usize, arity: usize, mut ok: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    let mut idx = vec![0; arity];
    loop {
        if !ok(&idx) {
            return Some(idx);
        }
        let mut p = arity;
        loop {
            if p == 0 {
                return None;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < d {
                break;
            }
            idx[p] = 0;
        }
    }
}

pub fn check_axioms(a: &FrobeniusAlgebra) -> AxiomReport {
    let d = a.dim();
    let f = a.field;
    let m = a.product_matrix();
    let delta = a.coproduct_matrix();
    let id = Matrix::identity(f, d);
    let u = a.unit_matrix();
    let swap = swap_matrix(f, d);
    let e = |i: usize| a.basis_vector(i);
    let mut checks = Vec::new();
    let mut push = |axiom: &'static str, w: Option<Vec<usize>>| {
        checks.push(AxiomCheck {
            axiom,
            passed: w.is_none(),
            witness: w.map(|w| w.iter().map(|&i| a.names[i].clone()).collect()),
        })
    };

    let mul = |x: &Matrix, y: &Matrix| m.compose(&x.tensor(y));
    push(
        "associativity",
        first_failure(d, 3, |t| {
            mul(&mul(&e(t[0]), &e(t[1])), &e(t[2])) == mul(&e(t[0]), &mul(&e(t[1]), &e(t[2])))
        }),
    );
    push(
        "commutativity",
        first_failure(d, 2, |t| mul(&e(t[0]), &e(t[1])) == mul(&e(t[1]), &e(t[0]))),
    );
    push(
        "unit",
        first_failure(d, 1, |t| mul(&u, &e(t[0])) == e(t[0]) && mul(&e(t[0]), &u) == e(t[0])),
    );
    let co_left = delta.tensor(&id).compose(&delta);
    let co_right = id.tensor(&delta).compose(&delta);
    push(
        "coassociativity",
        first_failure(d, 1, |t| co_left.compose(&e(t[0])) == co_right.compose(&e(t[0]))),
    );
    let flipped = swap.compose(&delta);
    push(
        "cocommutativity",
        first_failure(d, 1, |t| flipped.compose(&e(t[0])) == delta.compose(&e(t[0]))),
    );
    // Δ(ab) = (a⊗1)·Δ(b) = Δ(a)·(1⊗b)
    push(
        "module",
        first_failure(d, 2, |t| {
            let lhs = delta.compose(&mul(&e(t[0]), &e(t[1])));
            let left = a.left_multiplication(t[0]).tensor(&id).compose(&delta.compose(&e(t[1])));
            let right = id.tensor(&a.left_multiplication(t[1])).compose(&delta.compose(&e(t[0])));
            lhs == left && lhs == right
        }),
    );
    let h = a.handle();
    push(
        "centrality",
        first_failure(d, 1, |t| {
            let l = a.left_multiplication(t[0]);
            h.compose(&l) == l.compose(&h)
        }),
    );
    if let Some(g) = &a.grading {
        let deg = &g.degrees;
        push(
            "graded_product",
            first_failure(d, 3, |t| {
                a.product(t[0], t[1], t[2]).is_zero() || deg[t[2]] == deg[t[0]] + deg[t[1]] - g.n
            }),
        );
        push(
            "graded_coproduct",
            first_failure(d, 3, |t| {
                a.coproduct(t[0], t[1], t[2]).is_zero() || deg[t[1]] + deg[t[2]] == deg[t[0]] - g.n
            }),
        );
        push(
            "graded_unit",
            first_failure(d, 1, |t| a.unit[t[0]].is_zero() || deg[t[0]] == g.n),
        );
    }
    AxiomReport { checks }
}

fn swap_matrix(f: Field, d: usize) -> Matrix {
    let mut s = Matrix::zeros(f, d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s.set(j * d + i, i * d + j, f.one());
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperationMatrix {
    pub incoming: u32,
    pub outgoing: u32,
    pub genus: u32,
    /// Set when the algebra is graded.
    pub degree_shift: Option<i64>,
    pub matrix: Matrix,
}

/// `-(2g - 2 + p + q)·n`
pub fn degree_shift(p: u32, q: u32, g: u32, n: i64) -> i64 {
    -(2 * g as i64 - 2 + p as i64 + q as i64) * n
}

fn check_size(d: usize, p: u32, q: u32) -> Result<(), TqftError> {
    let pow = |k: u32| d.checked_pow(k).unwrap_or(usize::MAX);
    let (rows, cols) = (pow(q), pow(p.max(1)));
    if rows.saturating_mul(cols) > MAX_ENTRIES {
        return Err(TqftError::TooLarge { rows, cols });
    }
    Ok(())
}

/// The operation of the connected genus-`g` surface with `p` incoming and
/// `q ≥ 1` outgoing circles: `Δ^(q-1) ∘ H^g ∘ m^(p-1)`.
pub fn mu(a: &FrobeniusAlgebra, p: u32, q: u32, g: u32) -> Result<OperationMatrix, TqftError> {
    if q == 0 {
        return Err(TqftError::NoOutgoing);
    }
    let d = a.dim();
    check_size(d, p, q)?;
    let id = Matrix::identity(a.field, d);
    let m = a.product_matrix();
    let delta = a.coproduct_matrix();

    let mut op = if p == 0 { a.unit_matrix() } else { id.clone() };
    for _ in 1..p {
        op = m.compose(&op.tensor(&id));
    }
    let h = a.handle();
    for _ in 0..g {
        op = h.compose(&op);
    }
    let mut spread = id.clone();
    for _ in 1..q {
        spread = spread.tensor(&id).compose(&delta);
    }
    Ok(OperationMatrix {
        incoming: p,
        outgoing: q,
        genus: g,
        degree_shift: a.grading.as_ref().map(|gr| degree_shift(p, q, g, gr.n)),
        matrix: spread.compose(&op),
    })
}

/// Checks `μ_{q,r}(g2) ∘ μ_{p,q}(g1) = μ_{p,r}(g1 + g2 + q - 1)` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingCheck {
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub g1: u32,
    pub g2: u32,
    pub holds: bool,
    /// `composite - direct`; zero when the identity holds.
    pub difference: Matrix,
}

pub fn verify_gluing(a: &FrobeniusAlgebra, p: u32, q: u32, r: u32, g1: u32, g2: u32) -> Result<GluingCheck, TqftError> {
    let first = mu(a, p, q, g1)?;
    let second = mu(a, q, r, g2)?;
    let direct = mu(a, p, r, g1 + g2 + q - 1)?;
    let difference = second.matrix.compose(&first.matrix).sub(&direct.matrix);
    Ok(GluingCheck {
        p,
        q,
        r,
        g1,
        g2,
        holds: difference.is_zero(),
        difference,
    })
}

/// Inclusive upper limits for a gluing sweep; arities start at 1 and
/// genera at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepRange {
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub g1: u32,
    pub g2: u32,
}

impl std::str::FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<u32> = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        match v[..] {
            [p, q, r, g1, g2] if p >= 1 && q >= 1 && r >= 1 => Ok(SweepRange { p, q, r, g1, g2 }),
            [_, _, _, _, _] => Err("arities must be at least 1".into()),
            _ => Err(format!("expected p,q,r,g1,g2, got {} values", v.len())),
        }
    }
}

/// Every gluing identity in `range`, in lexicographic order of
/// `(p, q, r, g1, g2)`.
pub fn verify_sweep(a: &FrobeniusAlgebra, range: SweepRange, exec: &Executor) -> Result<Vec<GluingCheck>, TqftError> {
    let mut cases = Vec::new();
    for p in 1..=range.p {
        for q in 1..=range.q {
            for r in 1..=range.r {
                for g1 in 0..=range.g1 {
                    for g2 in 0..=range.g2 {
                        cases.push((p, q, r, g1, g2));
                    }
                }
            }
        }
    }
    exec.map(&cases, |&(p, q, r, g1, g2)| verify_gluing(a, p, q, r, g1, g2))
        .into_iter()
        .collect()
}

/// The operation of a chord diagram, which depends only on its type.
pub fn operation_from_diagram(c: &ChordDiagram, a: &FrobeniusAlgebra) -> Result<OperationMatrix, TqftError> {
    let t = c.top_type();
    mu(a, t.incoming, t.outgoing, t.genus)
}

/// First nonzero entry of `op` whose output and input degrees do not
/// differ by the recorded shift, as `(row, column)`.
pub fn graded_violation(a: &FrobeniusAlgebra, op: &OperationMatrix) -> Option<(usize, usize)> {
    let g = a.grading.as_ref()?;
    let shift = op.degree_shift?;
    let d = a.dim();
    let degree = |mut idx: usize, arity: u32| -> i64 {
        let mut s = 0;
        for _ in 0..arity {
            s += g.degrees[idx % d];
            idx /= d;
        }
        s
    };
    for r in 0..op.matrix.rows() {
        for c in 0..op.matrix.cols() {
            if !op.matrix.get(r, c).is_zero() && degree(r, op.outgoing) - degree(c, op.incoming) != shift {
                return Some((r, c));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counit {
    pub theta: Vec<Scalar>,
    /// Whether `(a, b) ↦ θ(ab)` is nondegenerate.
    pub nondegenerate: bool,
}

/// Solves `(θ ⊗ id) ∘ Δ = id` for `θ`.
pub fn counit_solve(a: &FrobeniusAlgebra) -> Option<Counit> {
    let d = a.dim();
    let f = a.field;
    // Row (i, k): Σ_j D[i][j][k] θ_j = δ_ik.
    let mut sys = Matrix::zeros(f, d * d, d);
    let mut rhs = vec![f.zero(); d * d];
    for i in 0..d {
        for k in 0..d {
            for j in 0..d {
                sys.set(i * d + k, j, a.coproduct(i, j, k).clone());
            }
            if i == k {
                rhs[i * d + k] = f.one();
            }
        }
    }
    let theta = solve(&sys, &rhs)?;
    let mut pairing = Matrix::zeros(f, d, d);
    for i in 0..d {
        for j in 0..d {
            let mut s = f.zero();
            for (k, t) in theta.iter().enumerate() {
                s = &s + &(a.product(i, j, k) * t);
            }
            pairing.set(i, j, s);
        }
    }
    Some(Counit {
        nondegenerate: pairing.rank() == d,
        theta,
    })
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| match s {
                Scalar::Q(q) if q.is_integer() => q.numer().to_string(),
                other => other.to_string(),
            }).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Parses an integer or `num/den` into the field.
pub fn parse_scalar(field: Field, s: &str) -> Result<Scalar, TqftError> {
    let bad = || TqftError::BadCoefficient(s.to_string());
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
    };
    field.rational(&r).ok_or_else(bad)
}

/// Canonical text of a scalar for file output: integers bare, otherwise `num/den`.
pub fn scalar_text(s: &Scalar) -> String {
    match s {
        Scalar::Q(q) if q.is_integer() => q.numer().to_string(),
        other => other.to_string(),
    }
}
