//! Divisor calculus on the moduli space of stable 1-pointed genus-2 curves.
//!
//! Covers the push-forward of degree-2 classes along the maps forgetting a
//! marked point, the exceptional-Weierstrass (Diaz) divisor pulled back along
//! the map attaching a fixed curve of genus `d - 1`, top intersections with
//! `psi^3`, and positions relative to Rulla's cones.

use serde::Serialize;

use crate::arith::{q, PolyQ, Rational};
use crate::chow::{d2_minus_1, slot, swap_markings, TautClass2, TAUT_DIM};
use crate::class::{Basis, Class};
use crate::error::{Error, Result};

pub struct M21Basis;

impl Basis for M21Basis {
    const NAMES: &'static [&'static str] = &["psi", "d0", "d1"];
}

/// `c_psi psi + c_d0 d0 + c_d1 d1`.
pub type DivisorM21 = Class<M21Basis>;

pub const PSI: usize = 0;
pub const D0: usize = 1;
pub const D1: usize = 2;

pub fn m21(psi: Rational, d0: Rational, d1: Rational) -> DivisorM21 {
    DivisorM21::from_rationals(vec![psi, d0, d1])
}

/// Classes with a name in the divisor theory of the 1-pointed space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NamedDivisor {
    Psi,
    /// Hodge class.
    Lambda,
    /// Closure of the Weierstrass divisor.
    Weierstrass,
    /// `12 lambda - d0`, a nef generator.
    TwelveLambdaMinusDelta0,
    /// `30 (W + psi)`, a moving-cone generator.
    MovingD,
    /// `20 W + 3 d0 + 6 d1`, a moving-cone generator.
    MovingE,
}

impl NamedDivisor {
    pub fn class(self) -> DivisorM21 {
        match self {
            NamedDivisor::Psi => DivisorM21::unit(PSI),
            NamedDivisor::Lambda => m21(q(0, 1), q(1, 10), q(1, 5)),
            NamedDivisor::Weierstrass => m21(q(3, 1), q(-1, 10), q(-6, 5)),
            NamedDivisor::TwelveLambdaMinusDelta0 => {
                &NamedDivisor::Lambda.class().scale(&q(12, 1)) - &DivisorM21::unit(D0)
            }
            NamedDivisor::MovingD => {
                (&NamedDivisor::Weierstrass.class() + &DivisorM21::unit(PSI)).scale(&q(30, 1))
            }
            NamedDivisor::MovingE => {
                &(&NamedDivisor::Weierstrass.class().scale(&q(20, 1))
                    + &DivisorM21::unit(D0).scale(&q(3, 1)))
                    + &DivisorM21::unit(D1).scale(&q(6, 1))
            }
        }
    }

    pub fn nef_generators() -> [NamedDivisor; 3] {
        [
            NamedDivisor::Psi,
            NamedDivisor::Lambda,
            NamedDivisor::TwelveLambdaMinusDelta0,
        ]
    }
}

/// Which marked point is forgotten.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Marking {
    First,
    Second,
}

/// Images of the 14 basis elements under forgetting the first point.
///
/// Products not listed push forward to zero.
pub fn pushforward_table() -> Vec<DivisorM21> {
    let mut table = vec![DivisorM21::zero(); TAUT_DIM];
    let z = q(0, 1);
    table[slot::PSI1PSI2] = m21(q(3, 1), z.clone(), z.clone());
    // kappa_1 = psi + d0/5 + 7 d1/5 from psi1^2, plus psi from psi2^2
    table[slot::PSI_SQ_SUM] = m21(q(2, 1), q(1, 5), q(7, 5));
    table[slot::PSI1D11] = m21(z.clone(), z.clone(), q(1, 1));
    table[slot::PSI1D12] = m21(z.clone(), z.clone(), q(2, 1));
    table[slot::PSI2D12] = m21(z.clone(), z.clone(), q(1, 1));
    table[slot::PSI1D0] = m21(z.clone(), q(3, 1), z.clone());
    table[slot::PSI2D0] = m21(z.clone(), q(1, 1), z.clone());
    table[slot::D2SQ] = m21(q(-1, 1), z.clone(), z.clone());
    table[slot::D12D2] = m21(z.clone(), z.clone(), q(1, 1));
    table[slot::D0D2] = m21(z.clone(), q(1, 1), z);
    table
}

/// The three coordinate functionals of the push-forward along the first
/// forgetful map, as rows over the 14 basis slots (psi, d0, d1 order).
pub fn pushforward_functionals() -> [Vec<Rational>; 3] {
    let table = pushforward_table();
    std::array::from_fn(|j| {
        table
            .iter()
            .map(|img| img.get(j).as_constant().expect("table is rational"))
            .collect()
    })
}

pub fn pushforward_pi(c: &TautClass2, marking: Marking) -> DivisorM21 {
    let source = match marking {
        Marking::First => c.clone(),
        Marking::Second => swap_markings(c),
    };
    let table = pushforward_table();
    source
        .coeffs()
        .iter()
        .zip(&table)
        .filter(|(p, _)| !p.is_zero())
        .fold(DivisorM21::zero(), |acc, (p, img)| {
            &acc + &img.scale_poly(p)
        })
}

/// `(d^2-1)((d^2+1) psi - (d^2+6)/5 (d0/12 + d1))`.
pub fn expected_pushforward_class() -> DivisorM21 {
    let f = d2_minus_1();
    let d2p1 = PolyQ::from_ints(&[1, 0, 1]);
    let d2p6 = PolyQ::from_ints(&[6, 0, 1]);
    DivisorM21::from_coeffs(vec![
        &f * &d2p1,
        (&f * &d2p6).scale(&q(-1, 60)),
        (&f * &d2p6).scale(&q(-1, 5)),
    ])
}

/// Number of pencils of degree `g + 1` on a general pointed genus-`g` curve
/// with a point of total ramification and a simple ramification at the marked
/// point: `(g + 2) g^2`.
pub fn m_count(g: u64) -> Result<u64> {
    if g < 1 {
        return Err(Error::Domain(format!("m(g) needs g >= 1, got {g}")));
    }
    Ok((g + 2) * g * g)
}

/// Symbolic coefficients of the exceptional-Weierstrass divisor class in the
/// genus-`g` moduli space, with `g` given as a polynomial.
pub mod diaz {
    use super::*;

    /// `g^2 (g-1)(3g-1) / 2`.
    pub fn lambda(g: &PolyQ) -> PolyQ {
        let one = PolyQ::one();
        let three_g_minus_1 = &g.scale(&q(3, 1)) - &one;
        (&(&(g * g) * &(g - &one)) * &three_g_minus_1).scale(&q(1, 2))
    }

    /// `-(g-1)^2 g (g+1) / 6`.
    pub fn delta0(g: &PolyQ) -> PolyQ {
        let one = PolyQ::one();
        let gm1 = g - &one;
        (&(&(&gm1 * &gm1) * g) * &(g + &one)).scale(&q(-1, 6))
    }

    /// `-i (g-i) g (g^2 + g - 4) / 2` for the boundary divisor of index `i`.
    pub fn boundary(i: &PolyQ, g: &PolyQ) -> PolyQ {
        let quad = &(&(g * g) + g) - &PolyQ::from(4);
        (&(&(i * &(g - i)) * g) * &quad).scale(&q(-1, 2))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiazClass {
    pub genus: u32,
    pub lambda: Rational,
    pub delta0: Rational,
    /// Coefficients of `delta_i` for `i = 1..=g/2`.
    pub delta: Vec<Rational>,
}

pub fn diaz_class(g: u32) -> Result<DiazClass> {
    if g < 3 {
        return Err(Error::Domain(format!("Diaz divisor needs g >= 3, got {g}")));
    }
    let gp = PolyQ::from(g as i64);
    let at = |p: PolyQ| p.eval(&Rational::zero());
    Ok(DiazClass {
        genus: g,
        lambda: at(diaz::lambda(&gp)),
        delta0: at(diaz::delta0(&gp)),
        delta: (1..=g / 2)
            .map(|i| at(diaz::boundary(&PolyQ::from(i as i64), &gp)))
            .collect(),
    })
}

/// Intermediate values of the pull-back computation, all polynomial in `d`.
#[derive(Clone, Debug, Serialize)]
pub struct ChiPipeline {
    /// Genus of the target moduli space, `d + 1`.
    pub genus: PolyQ,
    pub lambda: PolyQ,
    pub delta0: PolyQ,
    /// Coefficient of the boundary divisor splitting `1 + d`.
    pub elliptic_tail: PolyQ,
    /// Coefficient of the boundary divisor splitting `2 + (d - 1)`.
    pub attaching_node: PolyQ,
    /// The pulled-back class with `lambda` still expanded.
    pub pullback: DivisorM21,
    /// `(d+1)(d-1)^2 W`.
    pub weierstrass_excess: DivisorM21,
    pub result: DivisorM21,
    pub assumptions: Vec<&'static str>,
}

/// Pulls the Diaz class of genus `d + 1` back to the 1-pointed genus-2
/// space and removes the Weierstrass excess component.
///
/// Pull-back rules: `lambda`, `d0` and `d1` pull back to themselves, the
/// boundary divisor of the attaching node pulls back to `-psi`, and every other
/// boundary divisor pulls back to zero. Boundary divisors are tracked by
/// splitting type, so the `d = 2` case (where both splittings have index 1)
/// stays well-defined.
pub fn chi_pullback_pipeline() -> ChiPipeline {
    let d = PolyQ::var();
    let genus = &d + &PolyQ::one();
    let lambda = diaz::lambda(&genus);
    let delta0 = diaz::delta0(&genus);
    let elliptic_tail = diaz::boundary(&PolyQ::one(), &genus);
    let attaching_node = diaz::boundary(&PolyQ::from(2), &genus);

    let lambda_class = NamedDivisor::Lambda.class();
    let pullback = &(&lambda_class.scale_poly(&lambda)
        + &DivisorM21::from_coeffs(vec![PolyQ::zero(), delta0.clone(), elliptic_tail.clone()]))
        + &DivisorM21::unit(PSI).scale_poly(&-&attaching_node);

    let dm1 = PolyQ::from_ints(&[-1, 1]);
    let excess_factor = &genus * &(&dm1 * &dm1);
    let weierstrass_excess = NamedDivisor::Weierstrass.class().scale_poly(&excess_factor);
    let result = &pullback - &weierstrass_excess;
    ChiPipeline {
        genus,
        lambda,
        delta0,
        elliptic_tail,
        attaching_node,
        pullback,
        weierstrass_excess,
        result,
        assumptions: vec![
            "boundary divisors other than the elliptic-tail and attaching-node splittings pull back to zero",
            "at d = 2 the two splittings share index 1 and are tracked by splitting type",
        ],
    }
}

/// Top intersections on the 1-pointed genus-2 space used against `psi^3`.
#[derive(Clone, Debug, Serialize)]
pub struct TopIntersections {
    pub psi4: Rational,
    pub psi3_delta0: Rational,
    pub psi3_delta1: Rational,
    pub citation: &'static str,
}

pub fn faber_top_intersections() -> TopIntersections {
    TopIntersections {
        psi4: q(1, 1152),
        psi3_delta0: q(1, 48),
        psi3_delta1: q(0, 1),
        citation: "C. Faber, Chow rings of moduli spaces of curves (thesis), chapter 3",
    }
}

/// `c · psi^3` on the 1-pointed space.
pub fn psi_cubed_pairing(c: &DivisorM21) -> PolyQ {
    let t = faber_top_intersections();
    c.pair(&[t.psi4, t.psi3_delta0, t.psi3_delta1])
}

/// The DR class against `psi_1^3`, through the push-forward along the second
/// forgetful map (`psi_1 = pi_2^* psi + d2` and `psi_i d2 = 0`).
pub fn psi_cubed_intersection(class: &TautClass2) -> PolyQ {
    psi_cubed_pairing(&pushforward_pi(class, Marking::Second))
}

/// `(d^2-1)(3d^2-7)/5760`.
pub fn psi_cubed_closed_form() -> PolyQ {
    (d2_minus_1() * PolyQ::from_ints(&[-7, 0, 3])).scale(&q(1, 5760))
}

/// Writes `c = alpha W + beta psi` when `c` lies in that plane.
pub fn weierstrass_psi_decomposition(c: &DivisorM21) -> Option<(PolyQ, PolyQ)> {
    // W has d1/d0 ratio 12; psi has no boundary part.
    if c.get(D1) != &c.get(D0).scale(&q(12, 1)) {
        return None;
    }
    let alpha = c.get(D0).scale(&q(-10, 1));
    let beta = c.get(PSI) - &alpha.scale(&q(3, 1));
    Some((alpha, beta))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "generator", rename_all = "snake_case")]
pub enum ConePosition {
    Zero,
    /// Exactly one nonzero coordinate, and it is positive.
    ExtremalRay(&'static str),
    /// Two positive coordinates, one zero.
    Face,
    Interior,
    Outside,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    /// Coordinates in the effective-cone generators `(W, d0, d1)`.
    pub effective_coordinates: [Rational; 3],
    pub position: ConePosition,
    /// `(alpha, beta)` with `c = alpha W + beta psi`, when possible.
    pub weierstrass_psi: Option<(Rational, Rational)>,
    /// `(s, t)` with `c = s D + t psi`, when possible.
    pub moving_d_psi: Option<(Rational, Rational)>,
    /// Whether `c` lies in the cone spanned by `D` and `psi`.
    pub in_d_psi_cone: bool,
}

/// Places a numeric divisor class relative to the pseudo-effective cone
/// spanned by `W`, `d0` and `d1`, and relative to the cone spanned by `D` and
/// `psi`.
pub fn rulla_classify(c: &DivisorM21) -> Result<ConeReport> {
    let v = c
        .constants()
        .ok_or_else(|| Error::Domain("cone classification needs a numeric class".into()))?;
    let w = v[PSI].clone() / q(3, 1);
    let coords = [
        w.clone(),
        &v[D0] + &(&w / &q(10, 1)),
        &v[D1] + &(&w * &q(6, 5)),
    ];
    let names = ["W", "d0", "d1"];
    let nonzero: Vec<usize> = (0..3).filter(|&i| !coords[i].is_zero()).collect();
    let position = if coords.iter().any(Rational::is_negative) {
        ConePosition::Outside
    } else {
        match nonzero.len() {
            0 => ConePosition::Zero,
            1 => ConePosition::ExtremalRay(names[nonzero[0]]),
            2 => ConePosition::Face,
            _ => ConePosition::Interior,
        }
    };
    let weierstrass_psi = weierstrass_psi_decomposition(c).map(|(a, b)| {
        (
            a.as_constant().expect("numeric"),
            b.as_constant().expect("numeric"),
        )
    });
    let moving_d_psi = weierstrass_psi
        .as_ref()
        .map(|(a, b)| (a / &q(30, 1), b - a));
    let in_d_psi_cone = moving_d_psi
        .as_ref()
        .is_some_and(|(s, t)| !s.is_negative() && !t.is_negative());
    Ok(ConeReport {
        effective_coordinates: coords,
        position,
        weierstrass_psi,
        moving_d_psi,
        in_d_psi_cone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::theorem1_class;

    fn at(c: &DivisorM21, d: i64) -> Vec<Rational> {
        c.evaluate(&q(d, 1)).constants().unwrap()
    }

    #[test]
    fn named_classes_expand() {
        assert_eq!(
            NamedDivisor::Lambda.class(),
            m21(q(0, 1), q(1, 10), q(1, 5))
        );
        assert_eq!(
            NamedDivisor::MovingD.class(),
            m21(q(120, 1), q(-3, 1), q(-36, 1))
        );
        assert_eq!(
            NamedDivisor::MovingE.class(),
            m21(q(60, 1), q(1, 1), q(-18, 1))
        );
        assert_eq!(
            NamedDivisor::TwelveLambdaMinusDelta0.class(),
            m21(q(0, 1), q(1, 5), q(12, 5))
        );
        assert_eq!(NamedDivisor::nef_generators().len(), 3);
    }

    #[test]
    fn pushforward_of_basis_elements() {
        let pf = |k| pushforward_pi(&TautClass2::unit(k), Marking::First);
        assert_eq!(pf(slot::PSI1PSI2), m21(q(3, 1), q(0, 1), q(0, 1)));
        assert!(pf(slot::D0SQ).is_zero());
        assert!(pf(slot::PSI2D11).is_zero());
        // second marking uses the swapped table
        let pf2 = pushforward_pi(&TautClass2::unit(slot::PSI2D0), Marking::Second);
        assert_eq!(pf2, m21(q(0, 1), q(3, 1), q(0, 1)));
    }

    #[test]
    fn pushforward_of_dr_class_matches_closed_form() {
        let c = theorem1_class();
        let expected = expected_pushforward_class();
        assert_eq!(pushforward_pi(&c, Marking::First), expected);
        assert_eq!(pushforward_pi(&c, Marking::Second), expected);
    }

    #[test]
    fn expected_pushforward_values() {
        let w = NamedDivisor::Weierstrass.class();
        assert_eq!(
            at(&expected_pushforward_class(), 2),
            vec![q(15, 1), q(-1, 2), q(-6, 1)]
        );
        assert_eq!(
            expected_pushforward_class().evaluate(&q(2, 1)),
            w.scale(&q(5, 1))
        );
        assert!(expected_pushforward_class().evaluate(&q(1, 1)).is_zero());
    }

    #[test]
    fn m_count_examples() {
        assert_eq!(m_count(1).unwrap(), 3);
        assert_eq!(m_count(5).unwrap(), 175);
        assert_eq!(5 * 6 * 7, 35 + 175);
        assert!(m_count(0).is_err());
        for g in 1..=100u64 {
            assert_eq!(
                g * (g + 1) * (g + 2),
                ((g + 1).pow(2) - 1) + m_count(g).unwrap()
            );
        }
    }

    #[test]
    fn m_count_identity_is_polynomial() {
        let g = PolyQ::var();
        let one = PolyQ::one();
        let lhs = &(&g * &(&g + &one)) * &(&g + &PolyQ::from(2));
        let gp1 = &g + &one;
        let m = &(&g + &PolyQ::from(2)) * &(&g * &g);
        assert_eq!(lhs, &(&(&gp1 * &gp1) - &one) + &m);
    }

    #[test]
    fn diaz_values() {
        let g3 = diaz_class(3).unwrap();
        assert_eq!(g3.lambda, q(72, 1));
        assert_eq!(g3.delta0, q(-8, 1));
        // i(g-i) g (g^2+g-4)/2 at g=3, i=1: 2·3·8/2
        assert_eq!(g3.delta, vec![q(-24, 1)]);
        assert!(diaz_class(2).is_err());
        // i <-> g - i symmetry of the boundary coefficient
        let g = PolyQ::from(9);
        for i in 1..9 {
            assert_eq!(
                diaz::boundary(&PolyQ::from(i), &g),
                diaz::boundary(&PolyQ::from(9 - i), &g)
            );
        }
    }

    #[test]
    fn chi_pipeline_reproduces_pushforward() {
        let p = chi_pullback_pipeline();
        assert_eq!(p.result, expected_pushforward_class());
        // psi coefficient of the pull-back minus 3(d+1)(d-1)^2 is (d^2-1)(d^2+1)
        let psi_part = p.pullback.get(PSI) - &p.weierstrass_excess.get(PSI).clone();
        assert_eq!(psi_part, PolyQ::from_ints(&[-1, 0, 0, 0, 1]));
        assert_eq!(
            p.result.evaluate(&q(2, 1)),
            NamedDivisor::Weierstrass.class().scale(&q(5, 1))
        );
    }

    #[test]
    fn psi_cubed() {
        let c = theorem1_class();
        assert_eq!(psi_cubed_intersection(&c), psi_cubed_closed_form());
        assert_eq!(
            psi_cubed_pairing(&expected_pushforward_class()),
            psi_cubed_closed_form()
        );
        assert_eq!(psi_cubed_closed_form().eval(&q(2, 1)), q(1, 384));
        assert!(psi_cubed_closed_form().eval(&q(1, 1)).is_zero());
        // 15/5760 reduces to 1/384
        assert_eq!(q(15, 5760), q(1, 384));
    }

    #[test]
    fn cone_positions() {
        let d2 = rulla_classify(&expected_pushforward_class().evaluate(&q(2, 1))).unwrap();
        assert_eq!(d2.effective_coordinates, [q(5, 1), q(0, 1), q(0, 1)]);
        assert_eq!(d2.position, ConePosition::ExtremalRay("W"));
        assert!(!d2.in_d_psi_cone);

        let d3_class = expected_pushforward_class().evaluate(&q(3, 1));
        assert_eq!(d3_class, NamedDivisor::MovingD.class().scale(&q(2, 3)));
        let d3 = rulla_classify(&d3_class).unwrap();
        assert_eq!(d3.position, ConePosition::Interior);
        assert_eq!(d3.moving_d_psi, Some((q(2, 3), q(0, 1))));
        assert!(d3.in_d_psi_cone);

        let d5 = rulla_classify(&expected_pushforward_class().evaluate(&q(5, 1))).unwrap();
        assert!(d5.in_d_psi_cone);
        assert!(d5.moving_d_psi.unwrap().1.is_positive());

        let outside = rulla_classify(&m21(q(-1, 1), q(0, 1), q(0, 1))).unwrap();
        assert_eq!(outside.position, ConePosition::Outside);
        assert!(rulla_classify(&expected_pushforward_class()).is_err());
    }

    #[test]
    fn weierstrass_psi_form() {
        let (alpha, beta) = weierstrass_psi_decomposition(&expected_pushforward_class()).unwrap();
        let f = d2_minus_1();
        assert_eq!(alpha, (&f * &PolyQ::from_ints(&[6, 0, 1])).scale(&q(1, 6)));
        assert_eq!(beta, (&f * &PolyQ::from_ints(&[-4, 0, 1])).scale(&q(1, 2)));
    }
}
