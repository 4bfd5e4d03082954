//! Where the DR classes sit among effective codimension-two classes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{q, PolyQ, Rational};
use crate::chow::{
    d2_minus_1, multiply_divisors, slot, theorem1_class, theorem1_class_at, DivisorM22, Generator,
    TautClass2, TAUT_DIM,
};
use crate::error::{Error, Result};

/// `c_psi1 psi1 + c_psi2 psi2 - c_d0 d0 - c_d2 d2 - c_d11 d11 - c_d12 d12`
/// with every stored coefficient non-negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectiveDivisorPattern {
    coeffs: [Rational; 6],
}

impl EffectiveDivisorPattern {
    pub const FIELDS: [&'static str; 6] = ["c_psi1", "c_psi2", "c_d0", "c_d2", "c_d11", "c_d12"];

    /// Coefficients in the order of [`Self::FIELDS`].
    pub fn new(coeffs: [Rational; 6]) -> Result<Self> {
        for (c, name) in coeffs.iter().zip(Self::FIELDS) {
            if c.is_negative() {
                return Err(Error::PatternViolation {
                    slot: name,
                    value: c.to_string(),
                });
            }
        }
        Ok(EffectiveDivisorPattern { coeffs })
    }

    pub fn coeffs(&self) -> &[Rational; 6] {
        &self.coeffs
    }

    pub fn to_divisor(&self) -> DivisorM22 {
        let signed = Generator::ALL.iter().map(|g| {
            let c = &self.coeffs[g.index()];
            match g {
                Generator::Psi1 | Generator::Psi2 => c.clone(),
                _ => -c,
            }
        });
        DivisorM22::from_rationals(signed.collect())
    }
}

/// Coefficient of `psi1^2 + psi2^2` in the product of two patterns, computed
/// through the full product and reduction.
pub fn ci_obstruction(a: &EffectiveDivisorPattern, b: &EffectiveDivisorPattern) -> Rational {
    multiply_divisors(&a.to_divisor(), &b.to_divisor())
        .get(slot::PSI_SQ_SUM)
        .as_constant()
        .expect("rational product")
}

/// `(a_psi1 b_psi1 + a_psi2 b_psi2) / 2`.
pub fn ci_closed_form(a: &EffectiveDivisorPattern, b: &EffectiveDivisorPattern) -> Rational {
    let (x, y) = (a.coeffs(), b.coeffs());
    (&(&x[0] * &y[0]) + &(&x[1] * &y[1])) / q(2, 1)
}

/// `psi1^2 + psi2^2` coefficient of the DR class, `(d^2-1)(2-d^2)/4`.
pub fn dr_psi_square_coefficient() -> PolyQ {
    theorem1_class().get(slot::PSI_SQ_SUM).clone()
}

/// Leading `d^4` part of the DR class.
pub fn dr_infinity() -> TautClass2 {
    TautClass2::from_rationals(theorem1_class().degree_part(4))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeDecomposition {
    /// Coefficient of `DR(2)`, `(d^2-1)/3`.
    pub dr2: PolyQ,
    /// Coefficient of `DR(inf)`, `(d^2-1)(d^2-4)`.
    pub dr_inf: PolyQ,
    pub residual: TautClass2,
}

impl ConeDecomposition {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn at(&self, d: &Rational) -> (Rational, Rational) {
        (self.dr2.eval(d), self.dr_inf.eval(d))
    }
}

/// Writes the DR class in the span of `DR(2)` and `DR(inf)`.
pub fn cone_decomposition() -> ConeDecomposition {
    let f = d2_minus_1();
    let dr2 = f.scale(&q(1, 3));
    let dr_inf = &f * &PolyQ::from_ints(&[-4, 0, 1]);
    let combo = &theorem1_class_at(&q(2, 1)).scale_poly(&dr2) + &dr_infinity().scale_poly(&dr_inf);
    ConeDecomposition {
        residual: &theorem1_class() - &combo,
        dr2,
        dr_inf,
    }
}

/// Decorated boundary strata expressed in the 14-slot basis, from an
/// external change-of-basis source.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrataTable {
    pub entries: BTreeMap<String, Vec<Rational>>,
}

impl StrataTable {
    pub fn from_json(text: &str) -> Result<Self> {
        let table: StrataTable = serde_json::from_str(text).map_err(|source| Error::Fixture {
            name: "strata table".into(),
            source,
        })?;
        for (name, v) in &table.entries {
            if v.len() != TAUT_DIM {
                return Err(Error::StrataTable(format!(
                    "{name} has {} entries, expected {TAUT_DIM}",
                    v.len()
                )));
            }
        }
        Ok(table)
    }

    pub fn get(&self, name: &str) -> Option<TautClass2> {
        self.entries
            .get(name)
            .map(|v| TautClass2::from_rationals(v.clone()))
    }
}

/// Terms of the positive combination claimed to equal `DR(inf)`.
pub const NONEXTREMALITY_TERMS: [(&str, i64, i64); 7] = [
    ("d12d2", 1, 5),
    ("d0d2", 1, 60),
    ("d11|", 2, 5),
    ("d01|", 1, 30),
    ("d0|", 1, 30),
    ("d00", 1, 360),
    ("DR(2)", 1, 15),
];

pub const REQUIRED_STRATA: [&str; 4] = ["d11|", "d01|", "d0|", "d00"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Verified,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonextremalityReport {
    pub status: CheckStatus,
    pub note: String,
    pub coefficients: Vec<(String, Rational)>,
    pub all_coefficients_positive: bool,
    /// `DR(inf)` minus the combination, per slot.
    pub residual: Option<TautClass2>,
}

/// The right-hand side of the combination using `table` for the decorated
/// strata. Boundary products that are basis elements use their unit vectors.
pub fn nonextremality_combination(table: &StrataTable) -> Result<TautClass2> {
    for name in REQUIRED_STRATA {
        if !table.entries.contains_key(name) {
            return Err(Error::StrataTable(format!("missing entry {name}")));
        }
    }
    let units = [("d12d2", slot::D12D2), ("d0d2", slot::D0D2)];
    for (name, k) in units {
        if let Some(c) = table.get(name) {
            if c != TautClass2::unit(k) {
                return Err(Error::StrataTable(format!(
                    "{name} must be the basis element itself"
                )));
            }
        }
    }
    let mut total = TautClass2::zero();
    for (name, n, den) in NONEXTREMALITY_TERMS {
        let class = match name {
            "d12d2" => TautClass2::unit(slot::D12D2),
            "d0d2" => TautClass2::unit(slot::D0D2),
            "DR(2)" => theorem1_class_at(&q(2, 1)),
            _ => table.get(name).expect("checked above"),
        };
        total = &total + &class.scale(&q(n, den));
    }
    Ok(total)
}

pub fn nonextremality_check(table: Option<&StrataTable>) -> Result<NonextremalityReport> {
    let coefficients: Vec<(String, Rational)> = NONEXTREMALITY_TERMS
        .iter()
        .map(|(name, n, d)| (name.to_string(), q(*n, *d)))
        .collect();
    let all_coefficients_positive = coefficients.iter().all(|(_, c)| c.is_positive());
    let Some(table) = table else {
        return Ok(NonextremalityReport {
            status: CheckStatus::Skipped,
            note: "data-gated, skipped: needs an external change-of-basis table for d11|, d01|, d0|, d00".into(),
            coefficients,
            all_coefficients_positive,
            residual: None,
        });
    };
    let residual = &dr_infinity() - &nonextremality_combination(table)?;
    let ok = residual.is_zero();
    Ok(NonextremalityReport {
        status: if ok {
            CheckStatus::Verified
        } else {
            CheckStatus::Failed
        },
        note: if ok {
            "identity holds in every slot".into()
        } else {
            "identity fails; see residual".into()
        },
        coefficients,
        all_coefficients_positive,
        residual: Some(residual),
    })
}

/// Intersection count in the many-point setting as a function of one
/// weight: `2(n^2 - 1)` for `n != 0`, and `0` when `n = 0`.
pub fn appendix_count(n: i64) -> Rational {
    if n == 0 {
        Rational::zero()
    } else {
        Rational::integer(2 * (n * n - 1))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NonPolynomialityWitness {
    pub max_degree: usize,
    pub points: Vec<(Rational, Rational)>,
    pub interpolant: PolyQ,
    pub predicted_at_zero: Rational,
    pub actual_at_zero: Rational,
    pub witnessed: bool,
}

/// Interpolates the count through `±1, ..., ±(max_degree + 1)` and compares
/// the interpolant with the actual value at zero.
///
/// Any polynomial of degree at most `max_degree` agreeing with the count on
/// the nonzero points equals the interpolant, so the bound is beaten when the
/// interpolant has larger degree or mispredicts the value at zero. For
/// `max_degree = 0` the zero polynomial fits and there is no witness.
pub fn nonpolynomiality_witness(max_degree: usize) -> Result<NonPolynomialityWitness> {
    let m = max_degree as i64 + 1;
    let points: Vec<(Rational, Rational)> = (1..=m)
        .flat_map(|n| [n, -n])
        .map(|n| (Rational::integer(n), appendix_count(n)))
        .collect();
    let interpolant = PolyQ::interpolate(&points)?;
    let predicted_at_zero = interpolant.eval(&Rational::zero());
    let actual_at_zero = appendix_count(0);
    Ok(NonPolynomialityWitness {
        max_degree,
        witnessed: interpolant.degree().is_some_and(|k| k > max_degree)
            || predicted_at_zero != actual_at_zero,
        points,
        interpolant,
        predicted_at_zero,
        actual_at_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pat(v: [i64; 6]) -> EffectiveDivisorPattern {
        EffectiveDivisorPattern::new(v.map(|x| q(x, 1))).unwrap()
    }

    #[test]
    fn ci_examples() {
        let a = pat([1, 1, 0, 0, 0, 0]);
        assert_eq!(ci_obstruction(&a, &a), q(1, 1));
        let delta_only = pat([0, 0, 3, 1, 2, 5]);
        assert_eq!(
            ci_obstruction(&delta_only, &pat([4, 7, 1, 1, 1, 1])),
            q(0, 1)
        );
        assert!(EffectiveDivisorPattern::new([
            q(-1, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1)
        ])
        .is_err());
        assert_eq!(dr_psi_square_coefficient().eval(&q(2, 1)), q(-3, 2));
        let expected = (d2_minus_1() * PolyQ::from_ints(&[2, 0, -1])).scale(&q(1, 4));
        assert_eq!(dr_psi_square_coefficient(), expected);
        for d in 2..=50 {
            assert!(dr_psi_square_coefficient().eval(&q(d, 1)).is_negative());
        }
    }

    #[test]
    fn dr_infinity_values() {
        let c = dr_infinity();
        assert_eq!(c.get(slot::PSI1PSI2), &PolyQ::constant(q(1, 2)));
        assert_eq!(c.get(slot::PSI_SQ_SUM), &PolyQ::constant(q(-1, 4)));
        assert_eq!(c.get(slot::PSI1D11), &PolyQ::constant(q(-3, 20)));
        assert_eq!(c.get(slot::PSI2D12), &PolyQ::constant(q(1, 10)));
        assert_eq!(c.get(slot::PSI1D0), &PolyQ::constant(q(1, 120)));
        for k in [
            slot::D2SQ,
            slot::D12D2,
            slot::D0D2,
            slot::D0D11,
            slot::D0D12,
            slot::D0SQ,
        ] {
            assert!(c.get(k).is_zero());
        }
    }

    #[test]
    fn two_dimensional_cone() {
        let dec = cone_decomposition();
        assert!(dec.holds());
        assert_eq!(dec.at(&q(2, 1)), (q(1, 1), q(0, 1)));
        assert_eq!(dec.at(&q(3, 1)), (q(8, 3), q(40, 1)));
        for d in 2..=30 {
            let (a, b) = dec.at(&q(d, 1));
            assert!(!a.is_negative() && !b.is_negative());
        }
    }

    #[test]
    fn nonextremality_gating() {
        let r = nonextremality_check(None).unwrap();
        assert_eq!(r.status, CheckStatus::Skipped);
        assert!(r.note.contains("data-gated, skipped"));
        assert!(r.all_coefficients_positive);
        assert_eq!(r.coefficients.len(), 7);
    }

    #[test]
    fn zero_table_residual() {
        let zero = vec![Rational::zero(); TAUT_DIM];
        let table = StrataTable {
            entries: REQUIRED_STRATA
                .iter()
                .map(|n| (n.to_string(), zero.clone()))
                .collect(),
        };
        let r = nonextremality_check(Some(&table)).unwrap();
        assert_eq!(r.status, CheckStatus::Failed);
        let expected = &(&(&dr_infinity() - &TautClass2::unit(slot::D12D2).scale(&q(1, 5)))
            - &TautClass2::unit(slot::D0D2).scale(&q(1, 60)))
            - &theorem1_class_at(&q(2, 1)).scale(&q(1, 15));
        assert_eq!(r.residual.unwrap(), expected);
        assert!(!expected.is_zero());
    }

    #[test]
    fn table_validation() {
        assert!(StrataTable::from_json(r#"{"d00": ["1"]}"#).is_err());
        let t = StrataTable::from_json(
            r#"{"d00": ["0","0","0","0","0","0","0","0","0","0","0","0","0","1"]}"#,
        )
        .unwrap();
        assert!(nonextremality_check(Some(&t)).is_err());
        let mut entries = BTreeMap::new();
        for n in REQUIRED_STRATA {
            entries.insert(n.to_string(), vec![Rational::zero(); TAUT_DIM]);
        }
        entries.insert("d12d2".into(), vec![Rational::zero(); TAUT_DIM]);
        assert!(nonextremality_check(Some(&StrataTable { entries })).is_err());
    }

    #[test]
    fn witness() {
        assert_eq!(appendix_count(3), q(16, 1));
        assert_eq!(appendix_count(0), q(0, 1));
        assert_eq!(appendix_count(1), q(0, 1));
        let pts: Vec<_> = (1..=5).map(|n| (q(n, 1), appendix_count(n))).collect();
        let p = PolyQ::interpolate(&pts).unwrap();
        assert_eq!(p, PolyQ::from_ints(&[-2, 0, 2]));
        assert_eq!(p.eval(&q(0, 1)), q(-2, 1));
        let w0 = nonpolynomiality_witness(0).unwrap();
        assert!(!w0.witnessed);
        assert!(w0.interpolant.is_zero());
        for deg in 1..8 {
            let w = nonpolynomiality_witness(deg).unwrap();
            assert!(w.witnessed);
            assert_eq!(w.predicted_at_zero, q(-2, 1));
        }
    }

    fn arb_pattern() -> impl Strategy<Value = EffectiveDivisorPattern> {
        proptest::array::uniform6((0i64..50, 1i64..7))
            .prop_map(|v| EffectiveDivisorPattern::new(v.map(|(n, d)| q(n, d))).unwrap())
    }

    proptest! {
        #[test]
        fn ci_matches_closed_form(a in arb_pattern(), b in arb_pattern()) {
            let v = ci_obstruction(&a, &b);
            prop_assert_eq!(&v, &ci_closed_form(&a, &b));
            prop_assert!(!v.is_negative());
        }
    }
}
