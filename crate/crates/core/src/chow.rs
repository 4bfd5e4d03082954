//! Degree-1 and degree-2 tautological classes on the moduli space of stable
//! 2-pointed genus-2 curves.
//!
//! Degree-2 classes are products of the six divisor generators. The 21 formal
//! monomials are cut down to a 14-dimensional group by Getzler's seven
//! relations; [`TautClass2`] uses a fixed symmetric basis in which
//! `psi1^2 + psi2^2` is a single fused coordinate.

use std::fmt;
use std::sync::OnceLock;

use crate::arith::{q, PolyQ, Rational};
use crate::class::{Basis, Class};
use crate::linalg::QuotientMap;

/// Divisor generators in their fixed order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Psi1,
    Psi2,
    Delta0,
    Delta2,
    Delta11,
    Delta12,
}

use Generator::*;

impl Generator {
    pub const ALL: [Generator; 6] = [Psi1, Psi2, Delta0, Delta2, Delta11, Delta12];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        DivisorBasis::NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Generator> {
        DivisorBasis::index_of(name).map(|i| Generator::ALL[i])
    }

    /// Exchanges the roles of the two marked points.
    pub fn swapped(self) -> Generator {
        match self {
            Psi1 => Psi2,
            Psi2 => Psi1,
            g => g,
        }
    }
}

pub struct DivisorBasis;

impl Basis for DivisorBasis {
    const NAMES: &'static [&'static str] = &["psi1", "psi2", "d0", "d2", "d11", "d12"];
}

/// A divisor class `c_psi1 psi1 + c_psi2 psi2 + c_d0 d0 + c_d2 d2 + c_d11 d11 + c_d12 d12`.
pub type DivisorM22 = Class<DivisorBasis>;

/// Builds a divisor from `(generator, coefficient)` terms.
pub fn divisor(terms: &[(Generator, Rational)]) -> DivisorM22 {
    let mut out = DivisorM22::zero();
    for (g, c) in terms {
        let i = g.index();
        let v = out.get(i) + &PolyQ::constant(c.clone());
        out.set(i, v);
    }
    out
}

/// An unordered product of two generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial2 {
    lo: Generator,
    hi: Generator,
}

pub const MONOMIAL_COUNT: usize = 21;

impl Monomial2 {
    pub fn new(a: Generator, b: Generator) -> Self {
        if a <= b {
            Monomial2 { lo: a, hi: b }
        } else {
            Monomial2 { lo: b, hi: a }
        }
    }

    pub fn factors(self) -> (Generator, Generator) {
        (self.lo, self.hi)
    }

    /// Position in the lexicographic list of pairs `i <= j`.
    pub fn index(self) -> usize {
        let (i, j) = (self.lo.index(), self.hi.index());
        // rows 0..i contribute 6 + 5 + ... entries
        i * 6 - i * (i.saturating_sub(1)) / 2 + (j - i)
    }

    pub fn all() -> impl Iterator<Item = Monomial2> {
        Generator::ALL.into_iter().enumerate().flat_map(|(i, a)| {
            Generator::ALL[i..]
                .iter()
                .map(move |&b| Monomial2::new(a, b))
        })
    }

    pub fn swapped(self) -> Self {
        Monomial2::new(self.lo.swapped(), self.hi.swapped())
    }
}

impl fmt::Display for Monomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}^2", self.lo.name())
        } else {
            write!(f, "{}*{}", self.lo.name(), self.hi.name())
        }
    }
}

/// A formal linear combination of the 21 degree-2 monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalExpr {
    coeffs: Vec<PolyQ>,
}

impl Default for FormalExpr {
    fn default() -> Self {
        FormalExpr {
            coeffs: vec![PolyQ::zero(); MONOMIAL_COUNT],
        }
    }
}

impl FormalExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial2, C)>,
        C: Into<PolyQ>,
    {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, &c.into());
        }
        out
    }

    pub fn from_rationals(values: &[Rational]) -> Self {
        assert_eq!(values.len(), MONOMIAL_COUNT);
        FormalExpr {
            coeffs: values.iter().cloned().map(PolyQ::constant).collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial2, c: &PolyQ) {
        let i = m.index();
        self.coeffs[i] = &self.coeffs[i] + c;
    }

    pub fn coeff(&self, m: Monomial2) -> &PolyQ {
        &self.coeffs[m.index()]
    }

    pub fn coeffs(&self) -> &[PolyQ] {
        &self.coeffs
    }

    /// Rational coefficients, when all are constant.
    pub fn constants(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(PolyQ::as_constant).collect()
    }

    /// Expands the product of two divisor classes without reducing.
    pub fn product(a: &DivisorM22, b: &DivisorM22) -> Self {
        let mut out = Self::zero();
        for ga in Generator::ALL {
            let ca = a.get(ga.index());
            if ca.is_zero() {
                continue;
            }
            for gb in Generator::ALL {
                let cb = b.get(gb.index());
                if cb.is_zero() {
                    continue;
                }
                out.add_term(Monomial2::new(ga, gb), &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FormalExpr {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &FormalExpr) -> Self {
        FormalExpr {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn swapped(&self) -> Self {
        let mut out = Self::zero();
        for m in Monomial2::all() {
            out.add_term(m.swapped(), self.coeff(m));
        }
        out
    }
}

pub struct TautBasis;

impl Basis for TautBasis {
    const NAMES: &'static [&'static str] = &[
        "psi1psi2",
        "psi1sq+psi2sq",
        "psi1d11",
        "psi2d11",
        "psi1d12",
        "psi2d12",
        "psi1d0",
        "psi2d0",
        "d2sq",
        "d12d2",
        "d0d2",
        "d0d11",
        "d0d12",
        "d0sq",
    ];
}

/// A degree-2 class in the 14-element product basis.
pub type TautClass2 = Class<TautBasis>;

/// Slot indices of [`TautClass2`].
pub mod slot {
    pub const PSI1PSI2: usize = 0;
    pub const PSI_SQ_SUM: usize = 1;
    pub const PSI1D11: usize = 2;
    pub const PSI2D11: usize = 3;
    pub const PSI1D12: usize = 4;
    pub const PSI2D12: usize = 5;
    pub const PSI1D0: usize = 6;
    pub const PSI2D0: usize = 7;
    pub const D2SQ: usize = 8;
    pub const D12D2: usize = 9;
    pub const D0D2: usize = 10;
    pub const D0D11: usize = 11;
    pub const D0D12: usize = 12;
    pub const D0SQ: usize = 13;
}

pub const TAUT_DIM: usize = 14;

/// The monomials making up each basis element, in slot order.
pub fn basis_monomials(k: usize) -> Vec<Monomial2> {
    let m = Monomial2::new;
    match k {
        slot::PSI1PSI2 => vec![m(Psi1, Psi2)],
        slot::PSI_SQ_SUM => vec![m(Psi1, Psi1), m(Psi2, Psi2)],
        slot::PSI1D11 => vec![m(Psi1, Delta11)],
        slot::PSI2D11 => vec![m(Psi2, Delta11)],
        slot::PSI1D12 => vec![m(Psi1, Delta12)],
        slot::PSI2D12 => vec![m(Psi2, Delta12)],
        slot::PSI1D0 => vec![m(Psi1, Delta0)],
        slot::PSI2D0 => vec![m(Psi2, Delta0)],
        slot::D2SQ => vec![m(Delta2, Delta2)],
        slot::D12D2 => vec![m(Delta12, Delta2)],
        slot::D0D2 => vec![m(Delta0, Delta2)],
        slot::D0D11 => vec![m(Delta0, Delta11)],
        slot::D0D12 => vec![m(Delta0, Delta12)],
        slot::D0SQ => vec![m(Delta0, Delta0)],
        _ => panic!("basis slot {k} out of range"),
    }
}

/// Basis element `k` as a formal monomial vector.
pub fn basis_vector(k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); MONOMIAL_COUNT];
    for m in basis_monomials(k) {
        v[m.index()] = Rational::one();
    }
    v
}

/// Expands a class back into formal monomials (each basis element by its monomials).
pub fn expand(c: &TautClass2) -> FormalExpr {
    let mut out = FormalExpr::zero();
    for (k, p) in c.coeffs().iter().enumerate() {
        for m in basis_monomials(k) {
            out.add_term(m, p);
        }
    }
    out
}

/// A named relation among degree-2 monomials.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub expr: FormalExpr,
}

fn d(terms: &[(Generator, i64)]) -> DivisorM22 {
    divisor(
        &terms
            .iter()
            .map(|&(g, c)| (g, Rational::integer(c)))
            .collect::<Vec<_>>(),
    )
}

/// Getzler's seven relations among products of divisors.
pub fn relations() -> Vec<Relation> {
    let rel = |name, a: DivisorM22, b: DivisorM22| Relation {
        name,
        expr: FormalExpr::product(&a, &b),
    };
    let big = d(&[(Delta11, 12), (Delta12, 12), (Delta0, 1)]);
    vec![
        rel(
            "d12*(12 d11 + 12 d12 + d0)",
            d(&[(Delta12, 1)]),
            big.clone(),
        ),
        rel("d11*(12 d11 + 12 d12 + d0)", d(&[(Delta11, 1)]), big),
        rel(
            "d11*(psi1 + psi2 + d11)",
            d(&[(Delta11, 1)]),
            d(&[(Psi1, 1), (Psi2, 1), (Delta11, 1)]),
        ),
        rel("psi1*d2", d(&[(Psi1, 1)]), d(&[(Delta2, 1)])),
        rel("psi2*d2", d(&[(Psi2, 1)]), d(&[(Delta2, 1)])),
        rel("d11*d2", d(&[(Delta11, 1)]), d(&[(Delta2, 1)])),
        rel(
            "(psi1 - psi2)*(10 psi1 + 10 psi2 - 2 d11 - 12 d12 - d0)",
            d(&[(Psi1, 1), (Psi2, -1)]),
            d(&[
                (Psi1, 10),
                (Psi2, 10),
                (Delta11, -2),
                (Delta12, -12),
                (Delta0, -1),
            ]),
        ),
    ]
}

fn reduction() -> &'static QuotientMap {
    static MAP: OnceLock<QuotientMap> = OnceLock::new();
    MAP.get_or_init(|| {
        let basis: Vec<_> = (0..TAUT_DIM).map(basis_vector).collect();
        let rels: Vec<_> = relations()
            .iter()
            .map(|r| {
                r.expr
                    .constants()
                    .expect("relations have rational coefficients")
            })
            .collect();
        QuotientMap::new(&basis, &rels).expect("basis is complementary to the relation span")
    })
}

/// Rank of the relation span inside the 21 formal monomials.
pub fn relation_rank() -> usize {
    reduction().relation_rank()
}

/// Canonical coordinates of a formal expression in the 14-element basis.
pub fn reduce_to_basis(expr: &FormalExpr) -> TautClass2 {
    TautClass2::from_coeffs(reduction().apply_poly(expr.coeffs()))
}

pub fn multiply_divisors(a: &DivisorM22, b: &DivisorM22) -> TautClass2 {
    reduce_to_basis(&FormalExpr::product(a, b))
}

/// Exchanges the two marked points.
pub fn swap_markings(c: &TautClass2) -> TautClass2 {
    let mut out = c.clone();
    for (a, b) in [
        (slot::PSI1D11, slot::PSI2D11),
        (slot::PSI1D12, slot::PSI2D12),
        (slot::PSI1D0, slot::PSI2D0),
    ] {
        out.set(a, c.get(b).clone());
        out.set(b, c.get(a).clone());
    }
    out
}

pub fn swap_divisor(c: &DivisorM22) -> DivisorM22 {
    let mut out = c.clone();
    out.set(Psi1.index(), c.get(Psi2.index()).clone());
    out.set(Psi2.index(), c.get(Psi1.index()).clone());
    out
}

/// `d^2 - 1`.
pub fn d2_minus_1() -> PolyQ {
    PolyQ::from_ints(&[-1, 0, 1])
}

/// The closed-form class of the double-ramification locus as a polynomial in `d`.
pub fn theorem1_class() -> TautClass2 {
    let d2 = PolyQ::monomial(Rational::one(), 2);
    let f = d2_minus_1();
    let lin = |a: i64, b: i64, den: i64| {
        // (a d^2 + b) / den
        PolyQ::from_coeffs(vec![q(b, den), Rational::zero(), q(a, den)])
    };
    let psi_d11 = &f * &lin(-3, -2, 20);
    let psi_d12 = &f * &lin(1, -6, 10);
    let psi_d0 = &f * &lin(1, -6, 120);
    let mut c = TautClass2::zero();
    c.set(slot::PSI1PSI2, (&f * &d2).scale(&q(1, 2)));
    c.set(slot::PSI_SQ_SUM, &f * &lin(-1, 2, 4));
    c.set(slot::PSI1D11, psi_d11.clone());
    c.set(slot::PSI2D11, psi_d11);
    c.set(slot::PSI1D12, psi_d12.clone());
    c.set(slot::PSI2D12, psi_d12);
    c.set(slot::PSI1D0, psi_d0.clone());
    c.set(slot::PSI2D0, psi_d0);
    c
}

pub fn theorem1_class_at(d: &Rational) -> TautClass2 {
    theorem1_class().evaluate(d)
}
