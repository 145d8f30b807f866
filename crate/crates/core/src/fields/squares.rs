//! Square classes `k* / (k*)^2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{primes, Elem, Field, FieldKind, PAdic, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum SquareClassLabel {
    One,
    /// The non-square unit class. Over `Q_p` with `p = 3 mod 4` its
    /// representative is `-1`.
    Np,
    P,
    PNp,
    Squarefree(String),
    SquarefreePoly,
}

impl std::fmt::Display for SquareClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SquareClassLabel::One => write!(f, "1"),
            SquareClassLabel::Np => write!(f, "N_p"),
            SquareClassLabel::P => write!(f, "p"),
            SquareClassLabel::PNp => write!(f, "pN_p"),
            SquareClassLabel::Squarefree(n) => write!(f, "squarefree {n}"),
            SquareClassLabel::SquarefreePoly => write!(f, "squarefree polynomial"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClassRep {
    pub rep: Elem,
    pub label: Option<SquareClassLabel>,
}

impl SquareClassRep {
    pub fn field(&self) -> &Field {
        self.rep.field()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareClassReps {
    Finite(Vec<SquareClassRep>),
    Unbounded,
}

impl Field {
    /// The non-square used as `N_p`: the least one by encoding.
    pub fn least_non_square(&self) -> Option<Elem> {
        if self.characteristic() == 2 {
            return None;
        }
        let q = self.order()?;
        (2..q).map(|c| self.from_index(c)).find(|x| !x.is_square().unwrap())
    }

    fn padic_unit_rep(&self, square: bool) -> Elem {
        let p = self.padic_prime().unwrap();
        if square {
            self.one()
        } else if p % 4 == 3 {
            self.int(-1)
        } else {
            self.int(primes::least_non_residue(p) as i64)
        }
    }

    pub fn square_class_reps(&self) -> SquareClassReps {
        let rep = |x: Elem, l: SquareClassLabel| SquareClassRep { rep: x, label: Some(l) };
        match self.kind() {
            FieldKind::PrimeField { .. } | FieldKind::GaloisField { .. } => {
                let mut v = vec![rep(self.one(), SquareClassLabel::One)];
                if let Some(n) = self.least_non_square() {
                    v.push(rep(n, SquareClassLabel::Np));
                }
                SquareClassReps::Finite(v)
            }
            FieldKind::PAdic { p: 2, .. } => SquareClassReps::Finite(
                [1, 3, 5, 7, 2, 6, 10, 14]
                    .into_iter()
                    .map(|n| self.square_class(&self.int(n)).unwrap())
                    .collect(),
            ),
            FieldKind::PAdic { p, .. } => {
                let pe = self.int(*p as i64);
                let n = self.padic_unit_rep(false);
                SquareClassReps::Finite(vec![
                    rep(self.one(), SquareClassLabel::One),
                    rep(pe.clone(), SquareClassLabel::P),
                    rep(n.clone(), SquareClassLabel::Np),
                    rep(&pe * &n, SquareClassLabel::PNp),
                ])
            }
            _ => SquareClassReps::Unbounded,
        }
    }

    /// Canonical representative of the class of `x`.
    pub fn square_class(&self, x: &Elem) -> Result<SquareClassRep> {
        let x = self.embed(x)?;
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let rep = |e: Elem, l: SquareClassLabel| Ok(SquareClassRep { rep: e, label: Some(l) });
        match (self.kind(), x.value()) {
            (FieldKind::Rationals, Value::Rational(r)) => {
                let k = primes::squarefree_kernel(&(r.numer() * r.denom()))?;
                let label = if k.is_one() {
                    SquareClassLabel::One
                } else {
                    SquareClassLabel::Squarefree(k.to_string())
                };
                rep(self.rational(&BigRational::from_integer(k))?, label)
            }
            (FieldKind::PrimeField { .. } | FieldKind::GaloisField { .. }, _) => {
                if x.is_square()? {
                    rep(self.one(), SquareClassLabel::One)
                } else {
                    rep(self.least_non_square().unwrap(), SquareClassLabel::Np)
                }
            }
            (FieldKind::PAdic { p, .. }, Value::PAdic(v)) => {
                let PAdic::Unit { val, .. } = v else {
                    return Err(Error::PrecisionExhausted(format!("square class of {x}")));
                };
                let odd = val.is_odd();
                let pe = BigInt::from(*p);
                if *p == 2 {
                    let u = v.unit_mod(&pe, 3).ok_or_else(|| {
                        Error::PrecisionExhausted("2-adic class needs three digits".into())
                    })?;
                    let u: i64 = u.try_into().unwrap();
                    let n = if odd { 2 * u } else { u };
                    let label = if n == 1 {
                        SquareClassLabel::One
                    } else {
                        SquareClassLabel::Squarefree(n.to_string())
                    };
                    return rep(self.int(n), label);
                }
                let unit = v.unit_mod(&pe, 1).unwrap();
                let unit_sq = primes::legendre_big(&unit, &pe.to_biguint().unwrap()) == 1;
                let u = self.padic_unit_rep(unit_sq);
                let pp = self.int(*p as i64);
                match (odd, unit_sq) {
                    (false, true) => rep(u, SquareClassLabel::One),
                    (false, false) => rep(u, SquareClassLabel::Np),
                    (true, true) => rep(pp, SquareClassLabel::P),
                    (true, false) => rep(&pp * &u, SquareClassLabel::PNp),
                }
            }
            _ => {
                if x.is_square()? {
                    rep(self.one(), SquareClassLabel::One)
                } else {
                    Err(Error::Unsupported(format!(
                        "canonical square classes over {self}"
                    )))
                }
            }
        }
    }

    pub fn same_square_class(&self, x: &Elem, y: &Elem) -> Result<bool> {
        if x.is_zero() || y.is_zero() {
            return Err(Error::ZeroArgument);
        }
        x.div(y)?.is_square()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_classes() {
        let q = Field::rationals();
        assert_eq!(q.square_class(&q.int(18)).unwrap().rep, q.int(2));
        assert_eq!(q.square_class(&q.ratio(-3, 4).unwrap()).unwrap().rep, q.int(-3));
        assert_eq!(q.square_class_reps(), SquareClassReps::Unbounded);
    }

    #[test]
    fn padic_classes() {
        let k = Field::padic(3, 20).unwrap();
        let c = k.square_class(&k.int(6)).unwrap();
        assert_eq!(c.label, Some(SquareClassLabel::PNp));
        assert_eq!(c.rep, k.int(-3));
        let SquareClassReps::Finite(reps) = k.square_class_reps() else { panic!() };
        let got: Vec<Elem> = reps.into_iter().map(|r| r.rep).collect();
        assert_eq!(got, vec![k.int(1), k.int(3), k.int(-1), k.int(-3)]);
        let k5 = Field::padic(5, 20).unwrap();
        let SquareClassReps::Finite(reps) = k5.square_class_reps() else { panic!() };
        assert_eq!(reps[2].rep, k5.int(2));
    }

    #[test]
    fn finite_classes() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.square_class(&f.int(3)).unwrap().label, Some(SquareClassLabel::Np));
        let SquareClassReps::Finite(r) = Field::prime(5).unwrap().square_class_reps() else {
            panic!()
        };
        assert_eq!(r.len(), 2);
        let SquareClassReps::Finite(r) = Field::finite(4).unwrap().square_class_reps() else {
            panic!()
        };
        assert_eq!(r.len(), 1);
    }
}
