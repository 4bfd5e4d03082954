//! Degree-2 classes on the compact-type locus.
//!
//! The quotient is 5-dimensional with basis
//! `(psi1+psi2) d11, psi1 d12, psi2 d12, d2^2, d12 d2`. `d0` restricts to
//! zero, and three extra relations hold on compact type (the middle one for
//! each marking).

use std::sync::OnceLock;

use serde::Serialize;

use crate::arith::{q, PolyQ, Rational};
use crate::chow::{
    d2_minus_1, divisor, multiply_divisors, relations, slot, theorem1_class, FormalExpr, Generator,
    Monomial2, TautClass2, MONOMIAL_COUNT, TAUT_DIM,
};
use crate::class::{Basis, Class};
use crate::error::{Error, Result};
use crate::linalg::{solve_unique, Matrix, QuotientMap};

pub struct CtBasis;

impl Basis for CtBasis {
    const NAMES: &'static [&'static str] = &["psisum_d11", "psi1d12", "psi2d12", "d2sq", "d12d2"];
}

pub type CtClass = Class<CtBasis>;

pub const CT_DIM: usize = 5;

pub mod ct_slot {
    pub const PSISUM_D11: usize = 0;
    pub const PSI1D12: usize = 1;
    pub const PSI2D12: usize = 2;
    pub const D2SQ: usize = 3;
    pub const D12D2: usize = 4;
}

fn ct(v: [Rational; CT_DIM]) -> CtClass {
    CtClass::from_rationals(v.to_vec())
}

/// `(psi1 + psi2)(d12 - d11)`.
pub fn psi_sum_times_d12_minus_d11() -> CtClass {
    ct([q(-1, 1), q(1, 1), q(1, 1), q(0, 1), q(0, 1)])
}

/// Images of the 14 full-ring basis elements.
pub fn restriction_table() -> Vec<CtClass> {
    let z = || q(0, 1);
    let mut t = vec![CtClass::zero(); TAUT_DIM];
    t[slot::PSI1PSI2] = ct([q(3, 20), q(13, 20), q(13, 20), q(-3, 1), q(-21, 10)]);
    t[slot::PSI_SQ_SUM] = ct([q(7, 10), q(7, 10), q(7, 10), q(-2, 1), q(-7, 5)]);
    // (psi1 - psi2) d11 = (psi1 - psi2) d12 splits psi_i d11 symmetrically
    t[slot::PSI1D11] = ct([q(1, 2), q(1, 2), q(-1, 2), z(), z()]);
    t[slot::PSI2D11] = ct([q(1, 2), q(-1, 2), q(1, 2), z(), z()]);
    t[slot::PSI1D12] = CtClass::unit(ct_slot::PSI1D12);
    t[slot::PSI2D12] = CtClass::unit(ct_slot::PSI2D12);
    t[slot::D2SQ] = CtClass::unit(ct_slot::D2SQ);
    t[slot::D12D2] = CtClass::unit(ct_slot::D12D2);
    t
}

pub fn restrict_to_ct(c: &TautClass2) -> CtClass {
    restriction_table()
        .iter()
        .zip(c.coeffs())
        .filter(|(_, p)| !p.is_zero())
        .fold(CtClass::zero(), |acc, (img, p)| &acc + &img.scale_poly(p))
}

/// The three compact-type relations, with the middle one instantiated for
/// both markings, as formal expressions equal to zero.
pub fn ct_relations() -> Vec<(String, FormalExpr)> {
    use Generator::*;
    let m = Monomial2::new;
    let r2a = FormalExpr::from_terms([
        (m(Psi1, Psi2), q(1, 1)),
        (m(Psi1, Psi1), q(-3, 2)),
        (m(Psi2, Psi2), q(-3, 2)),
        (m(Psi1, Delta11), q(9, 10)),
        (m(Psi2, Delta11), q(9, 10)),
        (m(Psi1, Delta12), q(2, 5)),
        (m(Psi2, Delta12), q(2, 5)),
    ]);
    let r2b = |p: Generator| {
        FormalExpr::from_terms([
            (m(p, p), q(1, 1)),
            (m(p, Delta11), q(-7, 10)),
            (m(p, Delta12), q(-7, 10)),
            (m(Delta12, Delta2), q(7, 10)),
            (m(Delta2, Delta2), q(1, 1)),
        ])
    };
    let r2c = FormalExpr::from_terms([
        (m(Psi1, Delta11), q(1, 1)),
        (m(Psi2, Delta11), q(-1, 1)),
        (m(Psi1, Delta12), q(-1, 1)),
        (m(Psi2, Delta12), q(1, 1)),
    ]);
    vec![
        ("psi1psi2".into(), r2a),
        ("psi1sq".into(), r2b(Psi1)),
        ("psi2sq".into(), r2b(Psi2)),
        ("psi-difference".into(), r2c),
    ]
}

fn basis_exprs() -> Vec<FormalExpr> {
    use Generator::*;
    let m = Monomial2::new;
    vec![
        FormalExpr::from_terms([(m(Psi1, Delta11), q(1, 1)), (m(Psi2, Delta11), q(1, 1))]),
        FormalExpr::from_terms([(m(Psi1, Delta12), q(1, 1))]),
        FormalExpr::from_terms([(m(Psi2, Delta12), q(1, 1))]),
        FormalExpr::from_terms([(m(Delta2, Delta2), q(1, 1))]),
        FormalExpr::from_terms([(m(Delta12, Delta2), q(1, 1))]),
    ]
}

/// Kernel generators of the formal route: `d0` monomials, the full-ring
/// relations and the compact-type relations.
fn kernel_vectors() -> Vec<Vec<Rational>> {
    let mut kernel: Vec<Vec<Rational>> = Generator::ALL
        .iter()
        .map(|&g| {
            let mut v = vec![Rational::zero(); MONOMIAL_COUNT];
            v[Monomial2::new(Generator::Delta0, g).index()] = Rational::one();
            v
        })
        .collect();
    kernel.extend(
        relations()
            .iter()
            .map(|r| r.expr.constants().expect("rational relation")),
    );
    kernel.extend(
        ct_relations()
            .iter()
            .map(|(_, e)| e.constants().expect("rational relation")),
    );
    kernel
}

fn formal_map() -> &'static QuotientMap {
    static MAP: OnceLock<QuotientMap> = OnceLock::new();
    MAP.get_or_init(|| {
        let basis: Vec<_> = basis_exprs()
            .iter()
            .map(|e| e.constants().unwrap())
            .collect();
        QuotientMap::new(&basis, &kernel_vectors()).expect("compact-type quotient is 5-dimensional")
    })
}

/// Builds the 21 -> 5 quotient from scratch, reporting a rank defect.
pub fn build_formal_quotient() -> Result<QuotientMap> {
    let basis: Vec<_> = basis_exprs()
        .iter()
        .map(|e| e.constants().unwrap())
        .collect();
    QuotientMap::new(&basis, &kernel_vectors())
}

pub fn kernel_rank() -> usize {
    formal_map().relation_rank()
}

/// Restriction of a formal expression, reducing modulo the full kernel.
pub fn restrict_formal(e: &FormalExpr) -> CtClass {
    CtClass::from_coeffs(formal_map().apply_poly(e.coeffs()))
}

fn d_pow(k: usize) -> PolyQ {
    PolyQ::monomial(Rational::one(), k)
}

/// `1/2 L^2` with `L = d^2/2 ((psi1 - d2) + (psi2 - d2)) + d^2 d2 - d^2/2 d11`.
pub fn hain_class() -> CtClass {
    use Generator::*;
    let half_d2 = d_pow(2).scale(&q(1, 2));
    let mut l = divisor(&[]);
    l.set(Psi1.index(), half_d2.clone());
    l.set(Psi2.index(), half_d2.clone());
    l.set(Delta2.index(), &(-&half_d2.scale(&q(2, 1))) + &d_pow(2));
    l.set(Delta11.index(), -&half_d2);
    restrict_to_ct(&multiply_divisors(&l, &l)).scale(&q(1, 2))
}

/// `d^4 (1/4 (psi1+psi2)(d12-d11) - d2^2 - 7/10 d12 d2)`.
pub fn hain_closed_form() -> CtClass {
    let inner = &psi_sum_times_d12_minus_d11().scale(&q(1, 4))
        - &ct([q(0, 1), q(0, 1), q(0, 1), q(1, 1), q(7, 10)]);
    inner.scale_poly(&d_pow(4))
}

pub fn dr_restricted() -> CtClass {
    restrict_to_ct(&theorem1_class())
}

/// `(d^2-1)((d^2-1)/4 (psi1+psi2)(d12-d11) - (d^2+1) d2 (d2 + 7/10 d12))`.
pub fn dr_restricted_closed_form() -> CtClass {
    let f = d2_minus_1();
    let d2p1 = PolyQ::from_ints(&[1, 0, 1]);
    let a = psi_sum_times_d12_minus_d11().scale_poly(&f.scale(&q(1, 4)));
    let b = ct([q(0, 1), q(0, 1), q(0, 1), q(1, 1), q(7, 10)]).scale_poly(&d2p1);
    (&a - &b).scale_poly(&f)
}

/// Decorated boundary classes that the two known identities determine.
#[derive(Clone, Debug, Serialize)]
pub struct DecoratedRows {
    pub delta22: CtClass,
    pub delta11_bar: CtClass,
    /// Equal to `d12 d2` by definition.
    pub delta11_12: CtClass,
    /// Basis members with no expression available here.
    pub unhoused: Vec<&'static str>,
}

/// Solves for `delta22` and `delta11|` slot by slot from
/// `hain = d^4 (delta22 + delta11| - 1/5 delta11|12)` and
/// `dr = (d^2-1)((d^2+1) delta22 + (d^2-1) delta11| - (d^2+6)/5 delta11|12)`.
///
/// Each slot gives four equations (the Hain identity, and the `d^4`, `d^2`,
/// `d^0` coefficients of the DR identity) in two unknowns.
pub fn derive_decorated_rows() -> Result<DecoratedRows> {
    let hain = hain_class();
    let dr = dr_restricted();
    let e5 = CtClass::unit(ct_slot::D12D2);
    let f = d2_minus_1();
    let dr_shift = e5.scale_poly(&(&f * &PolyQ::from_ints(&[6, 0, 1])).scale(&q(1, 5)));
    let hain_shift = e5.scale(&q(1, 5));

    let a = Matrix::from_rows(vec![
        vec![q(1, 1), q(1, 1)],
        vec![q(1, 1), q(1, 1)],
        vec![q(0, 1), q(-2, 1)],
        vec![q(-1, 1), q(1, 1)],
    ]);
    let mut delta22 = Vec::with_capacity(CT_DIM);
    let mut delta11 = Vec::with_capacity(CT_DIM);
    for s in 0..CT_DIM {
        if hain
            .get(s)
            .coeffs()
            .iter()
            .enumerate()
            .any(|(k, c)| k != 4 && !c.is_zero())
        {
            return Err(Error::DecoratedMatch(format!(
                "slot {s}: Hain class is not a multiple of d^4"
            )));
        }
        let target = dr.get(s) + dr_shift.get(s);
        if target.degree().is_some_and(|deg| deg > 4)
            || [1, 3].iter().any(|&k| !target.coeff(k).is_zero())
        {
            return Err(Error::DecoratedMatch(format!(
                "slot {s}: DR class is not even of degree 4"
            )));
        }
        let b = vec![
            &hain.get(s).coeff(4) + &hain_shift.get(s).coeff(0),
            target.coeff(4),
            target.coeff(2),
            target.coeff(0),
        ];
        let x =
            solve_unique(&a, &b).map_err(|e| Error::DecoratedMatch(format!("slot {s}: {e:?}")))?;
        delta22.push(x[0].clone());
        delta11.push(x[1].clone());
    }
    let rows = DecoratedRows {
        delta22: CtClass::from_rationals(delta22),
        delta11_bar: CtClass::from_rationals(delta11),
        delta11_12: e5,
        unhoused: vec!["d11|1", "d11|2"],
    };
    let (h, r) = decorated_identities(&rows);
    if h != hain || r != dr {
        return Err(Error::DecoratedMatch("re-substitution failed".into()));
    }
    Ok(rows)
}

/// The Hain and DR classes rebuilt from decorated rows.
pub fn decorated_identities(rows: &DecoratedRows) -> (CtClass, CtClass) {
    let f = d2_minus_1();
    let hain = (&(&rows.delta22 + &rows.delta11_bar) - &rows.delta11_12.scale(&q(1, 5)))
        .scale_poly(&d_pow(4));
    let dr = (&(&rows.delta22.scale_poly(&PolyQ::from_ints(&[1, 0, 1]))
        + &rows.delta11_bar.scale_poly(&f))
        - &rows
            .delta11_12
            .scale_poly(&PolyQ::from_ints(&[6, 0, 1]).scale(&q(1, 5))))
        .scale_poly(&f);
    (hain, dr)
}

#[derive(Clone, Debug, Serialize)]
pub struct HacReport {
    pub dr_restricted: CtClass,
    pub hain: CtClass,
    pub difference: CtClass,
    /// Coefficients of `delta22`, `delta11|`, `delta11|12` in the difference.
    pub decorated_decomposition: [PolyQ; 3],
    pub decomposition_holds: bool,
    pub intermediate_holds: bool,
}

impl HacReport {
    pub fn holds(&self) -> bool {
        self.decomposition_holds && self.intermediate_holds
    }

    pub fn evaluate(&self, d: &Rational) -> HacReport {
        HacReport {
            dr_restricted: self.dr_restricted.evaluate(d),
            hain: self.hain.evaluate(d),
            difference: self.difference.evaluate(d),
            decorated_decomposition: self
                .decorated_decomposition
                .clone()
                .map(|p| PolyQ::constant(p.eval(d))),
            decomposition_holds: self.decomposition_holds,
            intermediate_holds: self.intermediate_holds,
        }
    }
}

/// Checks `hain - dr = delta22 + (2d^2-1) delta11| + (d^2-6/5) delta11|12`
/// as a polynomial identity.
pub fn verify_hac() -> Result<HacReport> {
    let rows = derive_decorated_rows()?;
    let hain = hain_class();
    let dr = dr_restricted();
    let difference = &hain - &dr;
    let coeffs = [
        PolyQ::one(),
        PolyQ::from_ints(&[-1, 0, 2]),
        PolyQ::constant(q(-6, 5)) + d_pow(2),
    ];
    let combined = &(&rows.delta22.scale_poly(&coeffs[0])
        + &rows.delta11_bar.scale_poly(&coeffs[1]))
        + &rows.delta11_12.scale_poly(&coeffs[2]);
    let intermediate = &psi_sum_times_d12_minus_d11()
        .scale_poly(&PolyQ::from_ints(&[-1, 0, 2]).scale(&q(1, 4)))
        - &ct([q(0, 1), q(0, 1), q(0, 1), q(1, 1), q(7, 10)]);
    Ok(HacReport {
        decomposition_holds: combined == difference,
        intermediate_holds: intermediate == difference,
        dr_restricted: dr,
        hain,
        difference,
        decorated_decomposition: coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{basis_monomials, expand, reduce_to_basis};
    use proptest::prelude::*;

    #[test]
    fn formal_quotient_has_dimension_5() {
        let map = build_formal_quotient().unwrap();
        assert_eq!(map.relation_rank(), 16);
        assert_eq!(map.dimension(), CT_DIM);
    }

    #[test]
    fn two_routes_agree() {
        for m in Monomial2::all() {
            let e = FormalExpr::from_terms([(m, q(1, 1))]);
            assert_eq!(
                restrict_to_ct(&reduce_to_basis(&e)),
                restrict_formal(&e),
                "{m}"
            );
        }
        for k in 0..TAUT_DIM {
            assert_eq!(
                restrict_to_ct(&TautClass2::unit(k)),
                restrict_formal(&expand(&TautClass2::unit(k)))
            );
            assert!(!basis_monomials(k).is_empty());
        }
    }

    #[test]
    fn relations_vanish() {
        for r in relations() {
            assert!(restrict_formal(&r.expr).is_zero(), "{}", r.name);
            assert!(restrict_to_ct(&reduce_to_basis(&r.expr)).is_zero());
        }
        for (name, r) in ct_relations() {
            assert!(restrict_formal(&r).is_zero(), "{name}");
        }
    }

    #[test]
    fn simple_restrictions() {
        assert!(restrict_to_ct(&TautClass2::unit(slot::D0SQ)).is_zero());
        assert_eq!(
            restrict_to_ct(&TautClass2::unit(slot::D2SQ)),
            CtClass::unit(ct_slot::D2SQ)
        );
    }

    #[test]
    fn dr_restriction() {
        assert_eq!(dr_restricted(), dr_restricted_closed_form());
        assert!(dr_restricted().evaluate(&q(1, 1)).is_zero());
    }

    #[test]
    fn hain() {
        let h = hain_class();
        assert_eq!(h, hain_closed_form());
        assert!(h.evaluate(&q(0, 1)).is_zero());
        assert_eq!(
            h.evaluate(&q(1, 1)),
            ct([q(-1, 4), q(1, 4), q(1, 4), q(-1, 1), q(-7, 10)])
        );
        for p in h.coeffs() {
            assert!((0..4).all(|k| p.coeff(k).is_zero()));
        }
        // formal route gives the same square
        let l = {
            use Generator::*;
            let mut l = divisor(&[]);
            l.set(Psi1.index(), d_pow(2).scale(&q(1, 2)));
            l.set(Psi2.index(), d_pow(2).scale(&q(1, 2)));
            l.set(Delta11.index(), d_pow(2).scale(&q(-1, 2)));
            l
        };
        assert_eq!(
            restrict_formal(&FormalExpr::product(&l, &l)).scale(&q(1, 2)),
            h
        );
    }

    #[test]
    fn decorated_rows() {
        let rows = derive_decorated_rows().unwrap();
        assert_eq!(
            rows.delta22,
            ct([q(0, 1), q(0, 1), q(0, 1), q(-1, 1), q(0, 1)])
        );
        assert_eq!(
            rows.delta11_bar,
            &psi_sum_times_d12_minus_d11().scale(&q(1, 4))
                - &CtClass::unit(ct_slot::D12D2).scale(&q(1, 2))
        );
        let sum = &(&rows.delta22 + &rows.delta11_bar) - &rows.delta11_12.scale(&q(1, 5));
        assert_eq!(sum.scale_poly(&d_pow(4)), hain_closed_form());
    }

    #[test]
    fn hac_identity() {
        let report = verify_hac().unwrap();
        assert!(report.decomposition_holds);
        assert!(report.intermediate_holds);
        let d = PolyQ::var();
        let d2 = &d * &d;
        let f = d2_minus_1();
        assert_eq!(&d_pow(4) - &(&f * &(&d2 + &PolyQ::one())), PolyQ::one());
        let lhs =
            &d_pow(4).scale(&q(-1, 5)) + &(&f * &PolyQ::from_ints(&[6, 0, 1])).scale(&q(1, 5));
        assert_eq!(lhs, report.decorated_decomposition[2]);
        let at3 = report.evaluate(&q(3, 1));
        assert_eq!(at3.difference, report.difference.evaluate(&q(3, 1)));
    }

    fn arb_class() -> impl Strategy<Value = TautClass2> {
        proptest::collection::vec(-30i64..30, TAUT_DIM)
            .prop_map(|v| TautClass2::from_rationals(v.into_iter().map(|x| q(x, 1)).collect()))
    }

    proptest! {
        #[test]
        fn restriction_is_linear(a in arb_class(), b in arb_class(), k in -5i64..5) {
            let lhs = restrict_to_ct(&(&a + &b.scale(&q(k, 1))));
            let rhs = &restrict_to_ct(&a) + &restrict_to_ct(&b).scale(&q(k, 1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn restriction_commutes_with_swap(a in arb_class()) {
            let r = restrict_to_ct(&crate::chow::swap_markings(&a));
            let s = restrict_to_ct(&a);
            prop_assert_eq!(r.get(ct_slot::PSI1D12), s.get(ct_slot::PSI2D12));
            prop_assert_eq!(r.get(ct_slot::D2SQ), s.get(ct_slot::D2SQ));
        }
    }
}
