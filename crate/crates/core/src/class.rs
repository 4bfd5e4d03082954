//! Coefficient vectors over a fixed, named basis.
//!
//! Every class space in the crate (degree-1 and degree-2 groups, the
//! compact-type quotient) is a [`Class`] over a [`Basis`] marker. Coefficients
//! are [`PolyQ`] so one type carries both symbolic-in-`d` and numeric values.

use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{PolyQ, Rational};

pub trait Basis: 'static {
    /// Coordinate names, in coordinate order. Also the JSON keys.
    const NAMES: &'static [&'static str];

    fn dim() -> usize {
        Self::NAMES.len()
    }

    fn index_of(name: &str) -> Option<usize> {
        Self::NAMES.iter().position(|n| *n == name)
    }
}

pub struct Class<B: Basis> {
    coeffs: Vec<PolyQ>,
    _basis: PhantomData<B>,
}

impl<B: Basis> Class<B> {
    pub fn zero() -> Self {
        Class {
            coeffs: vec![PolyQ::zero(); B::dim()],
            _basis: PhantomData,
        }
    }

    pub fn unit(i: usize) -> Self {
        let mut c = Self::zero();
        c.coeffs[i] = PolyQ::one();
        c
    }

    /// Panics unless `coeffs.len()` matches the basis.
    pub fn from_coeffs(coeffs: Vec<PolyQ>) -> Self {
        assert_eq!(coeffs.len(), B::dim(), "coefficient count");
        Class {
            coeffs,
            _basis: PhantomData,
        }
    }

    pub fn from_rationals(values: Vec<Rational>) -> Self {
        Self::from_coeffs(values.into_iter().map(PolyQ::constant).collect())
    }

    pub fn coeffs(&self) -> &[PolyQ] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<PolyQ> {
        self.coeffs
    }

    pub fn get(&self, i: usize) -> &PolyQ {
        &self.coeffs[i]
    }

    pub fn set(&mut self, i: usize, value: PolyQ) {
        self.coeffs[i] = value;
    }

    /// Panics on an unknown name.
    pub fn named(&self, name: &str) -> &PolyQ {
        let i = B::index_of(name).unwrap_or_else(|| panic!("no basis element {name}"));
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PolyQ::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, p: &PolyQ) -> Self {
        self.map(|a| a * p)
    }

    pub fn map(&self, f: impl Fn(&PolyQ) -> PolyQ) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Substitutes a value for `d` in every coefficient.
    pub fn evaluate(&self, d: &Rational) -> Self {
        self.map(|p| PolyQ::constant(p.eval(d)))
    }

    /// The constant coefficients, when every coordinate is constant.
    pub fn constants(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(PolyQ::as_constant).collect()
    }

    /// Coefficient of `d^k` in every slot.
    pub fn degree_part(&self, k: usize) -> Vec<Rational> {
        self.coeffs.iter().map(|p| p.coeff(k)).collect()
    }

    /// Nonzero coordinates with their names.
    pub fn terms(&self) -> impl Iterator<Item = (&'static str, &PolyQ)> {
        B::NAMES
            .iter()
            .copied()
            .zip(&self.coeffs)
            .filter(|(_, p)| !p.is_zero())
    }

    /// Pairs the class with a rational functional on its coordinates.
    pub fn pair(&self, functional: &[Rational]) -> PolyQ {
        assert_eq!(functional.len(), B::dim());
        functional
            .iter()
            .zip(&self.coeffs)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, p)| p.scale(c))
            .sum()
    }
}

impl<B: Basis> Clone for Class<B> {
    fn clone(&self) -> Self {
        Self::from_coeffs(self.coeffs.clone())
    }
}

impl<B: Basis> PartialEq for Class<B> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<B: Basis> Eq for Class<B> {}

impl<B: Basis> Default for Class<B> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<B: Basis> Add for &Class<B> {
    type Output = Class<B>;
    fn add(self, rhs: &Class<B>) -> Class<B> {
        Class::from_coeffs(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl<B: Basis> Sub for &Class<B> {
    type Output = Class<B>;
    fn sub(self, rhs: &Class<B>) -> Class<B> {
        Class::from_coeffs(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl<B: Basis> Add for Class<B> {
    type Output = Class<B>;
    fn add(self, rhs: Class<B>) -> Class<B> {
        &self + &rhs
    }
}

impl<B: Basis> Sub for Class<B> {
    type Output = Class<B>;
    fn sub(self, rhs: Class<B>) -> Class<B> {
        &self - &rhs
    }
}

impl<B: Basis> Neg for &Class<B> {
    type Output = Class<B>;
    fn neg(self) -> Class<B> {
        self.map(|p| -p)
    }
}

impl<B: Basis> Neg for Class<B> {
    type Output = Class<B>;
    fn neg(self) -> Class<B> {
        -&self
    }
}

impl<B: Basis> fmt::Debug for Class<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                B::NAMES
                    .iter()
                    .zip(&self.coeffs)
                    .map(|(n, p)| (n, p.to_string())),
            )
            .finish()
    }
}

impl<B: Basis> fmt::Display for Class<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (name, p) in self.terms() {
            if any {
                write!(f, " + ")?;
            }
            write!(f, "({p})*{name}")?;
            any = true;
        }
        if !any {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<B: Basis> Serialize for Class<B> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(B::dim()))?;
        for (name, p) in B::NAMES.iter().zip(&self.coeffs) {
            map.serialize_entry(name, p)?;
        }
        map.end()
    }
}

impl<'de, B: Basis> Deserialize<'de> for Class<B> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = std::collections::BTreeMap::<String, PolyQ>::deserialize(deserializer)?;
        let mut out = Self::zero();
        for (name, p) in raw {
            let i = B::index_of(&name)
                .ok_or_else(|| D::Error::custom(format!("unknown basis element {name:?}")))?;
            out.coeffs[i] = p;
        }
        Ok(out)
    }
}
