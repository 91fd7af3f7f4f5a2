//! Order-k binary potentials: supermodularity projections, alpha, the
//! order-3 indicator construction, and exact representability tests.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::model::Potential;
use crate::scalar::Scalar;

pub const MAX_ORDER: usize = 10;
pub const MAX_FEASIBILITY_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubmodularError {
    #[error("order {0} is outside 2..={MAX_ORDER}")]
    BadOrder(usize),
    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("table entry {0} is not finite")]
    NonFinite(usize),
    #[error("scope repeats variable `{0}`")]
    RepeatedVariable(String),
    #[error("bad projection indices ({i}, {j}) or rest of length {rest} for order {k}")]
    BadIndices { i: usize, j: usize, rest: usize, k: usize },
    #[error("potential is not supermodular: {0}")]
    NotSupermodular(String),
    #[error("order {found} exceeds the feasibility search cap {cap}")]
    TooLarge { found: usize, cap: usize },
    #[error("malformed potential JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHighOrderPotential {
    pub scope: Vec<String>,
    pub table: Vec<f64>,
}

/// An order-k potential over binary variables. `table[x]` stores the
/// setting whose bit `k - 1 - i` is the label of variable `i`, so the last
/// variable varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct HighOrderPotential<T> {
    scope: Vec<String>,
    table: Vec<T>,
}

/// One two-variable projection: pair `(i, j)` with the other variables at
/// `rest` (in index order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection<T> {
    pub i: usize,
    pub j: usize,
    pub rest: Vec<usize>,
    pub value: T,
}

impl<T: Scalar> Projection<T> {
    pub fn describe(&self, scope: &[String]) -> String {
        let others: Vec<String> = (0..scope.len())
            .filter(|&v| v != self.i && v != self.j)
            .zip(&self.rest)
            .map(|(v, l)| format!("{}={l}", scope[v]))
            .collect();
        format!(
            "s({}, {} | {}) = {}",
            scope[self.i],
            scope[self.j],
            others.join(", "),
            self.value
        )
    }
}

impl<T: Scalar> HighOrderPotential<T> {
    pub fn new(scope: Vec<String>, table: Vec<T>) -> Result<Self, SubmodularError> {
        let k = scope.len();
        if !(2..=MAX_ORDER).contains(&k) {
            return Err(SubmodularError::BadOrder(k));
        }
        if table.len() != 1 << k {
            return Err(SubmodularError::TableSize {
                expected: 1 << k,
                found: table.len(),
            });
        }
        if let Some(bad) = table.iter().position(|x| !x.is_finite_value()) {
            return Err(SubmodularError::NonFinite(bad));
        }
        for (a, name) in scope.iter().enumerate() {
            if scope[..a].contains(name) {
                return Err(SubmodularError::RepeatedVariable(name.clone()));
            }
        }
        Ok(HighOrderPotential { scope, table })
    }

    /// Variables named `X1..Xk`.
    pub fn anonymous(table: Vec<T>) -> Result<Self, SubmodularError> {
        let k = table.len().max(1).trailing_zeros() as usize;
        Self::new((1..=k).map(|i| format!("X{i}")).collect(), table)
    }

    pub fn from_raw(raw: &RawHighOrderPotential) -> Result<Self, SubmodularError> {
        let table = raw
            .table
            .iter()
            .enumerate()
            .map(|(i, &x)| T::from_f64(x).ok_or(SubmodularError::NonFinite(i)))
            .collect::<Result<Vec<T>, _>>()?;
        Self::new(raw.scope.clone(), table)
    }

    pub fn from_json(text: &str) -> Result<Self, SubmodularError> {
        let raw: RawHighOrderPotential =
            serde_json::from_str(text).map_err(|e| SubmodularError::Json(e.to_string()))?;
        Self::from_raw(&raw)
    }

    pub fn order(&self) -> usize {
        self.scope.len()
    }

    pub fn scope(&self) -> &[String] {
        &self.scope
    }

    pub fn table(&self) -> &[T] {
        &self.table
    }

    /// Label of variable `i` in setting `x`.
    pub fn bit(&self, x: usize, i: usize) -> usize {
        x >> (self.order() - 1 - i) & 1
    }

    fn index_with(&self, i: usize, xi: usize, j: usize, xj: usize, rest: &[usize]) -> usize {
        let k = self.order();
        let mut others = rest.iter();
        (0..k).fold(0, |acc, v| {
            let label = if v == i {
                xi
            } else if v == j {
                xj
            } else {
                *others.next().unwrap()
            };
            acc << 1 | label
        })
    }

    /// `psi(00) + psi(11) - psi(10) - psi(01)` on the `(i, j)` projection
    /// with the other variables at `rest`.
    pub fn supermodularity(&self, i: usize, j: usize, rest: &[usize]) -> Result<T, SubmodularError> {
        let k = self.order();
        if i == j || i >= k || j >= k || rest.len() != k - 2 || rest.iter().any(|&l| l > 1) {
            return Err(SubmodularError::BadIndices {
                i,
                j,
                rest: rest.len(),
                k,
            });
        }
        let at = |a, b| self.table[self.index_with(i, a, j, b, rest)];
        Ok(at(0, 0) + at(1, 1) - at(1, 0) - at(0, 1))
    }

    /// Every `(i < j, rest)` projection, pairs in lexicographic order and
    /// rests in counting order.
    pub fn projections(&self) -> Vec<Projection<T>> {
        let k = self.order();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                for r in 0..1usize << (k - 2) {
                    let rest: Vec<usize> = (0..k - 2).map(|b| r >> (k - 3 - b) & 1).collect();
                    let value = self.supermodularity(i, j, &rest).expect("indices in range");
                    out.push(Projection { i, j, rest, value });
                }
            }
        }
        out
    }

    /// First projection with supermodularity below `-eps`.
    pub fn supermodularity_violation(&self, eps: T) -> Option<Projection<T>> {
        self.projections().into_iter().find(|p| p.value < -eps)
    }

    pub fn is_supermodular(&self, eps: T) -> bool {
        self.supermodularity_violation(eps).is_none()
    }

    /// `sum_x (-1)^(number of ones in x) psi_x`.
    pub fn alpha(&self) -> T {
        let mut sum = T::zero();
        for (x, &v) in self.table.iter().enumerate() {
            if x.count_ones() % 2 == 0 {
                sum += v;
            } else {
                sum -= v;
            }
        }
        sum
    }
}

/// Which indicator family carries the order >= 2 terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// All-zeros indicators.
    #[serde(rename = "O")]
    Zeros,
    /// All-ones indicators.
    #[serde(rename = "I")]
    Ones,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Zeros => "O",
            Branch::Ones => "I",
        }
    }
}

/// `psi(x) = constant + sum of Z_Y over Y all zero in x + sum of A_Y over Y
/// all one in x`. Subsets are sorted variable indices.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorRepresentation<T> {
    pub branch: Branch,
    pub constant: T,
    pub zero_weights: BTreeMap<Vec<usize>, T>,
    pub one_weights: BTreeMap<Vec<usize>, T>,
}

impl<T: Scalar> IndicatorRepresentation<T> {
    pub fn evaluate(&self, labels: &[usize]) -> T {
        let mut sum = self.constant;
        for (y, &w) in &self.zero_weights {
            if y.iter().all(|&v| labels[v] == 0) {
                sum += w;
            }
        }
        for (y, &w) in &self.one_weights {
            if y.iter().all(|&v| labels[v] == 1) {
                sum += w;
            }
        }
        sum
    }

    /// Smallest weight over subsets of two or more variables.
    pub fn min_higher_weight(&self) -> Option<T> {
        self.zero_weights
            .iter()
            .chain(&self.one_weights)
            .filter(|(y, _)| y.len() >= 2)
            .map(|(_, &w)| w)
            .reduce(T::min_of)
    }

    /// One single-entry potential per indicator, over model variables
    /// `scope[i]`; the constant is returned separately.
    pub fn to_potentials(&self, scope: &[usize]) -> (Vec<Potential<T>>, T) {
        let mut out = Vec::new();
        for (weights, label) in [(&self.zero_weights, 0usize), (&self.one_weights, 1)] {
            for (y, &w) in weights {
                if w.is_zero() {
                    continue;
                }
                let mut table = vec![T::zero(); 1 << y.len()];
                let index = if label == 0 { 0 } else { table.len() - 1 };
                table[index] = w;
                out.push(Potential::new(y.iter().map(|&v| scope[v]).collect(), table));
            }
        }
        (out, self.constant)
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        let list = |m: &BTreeMap<Vec<usize>, T>| -> Vec<Value> {
            m.iter()
                .map(|(y, w)| {
                    let subset: Vec<&str> = y.iter().map(|&v| names[v].as_str()).collect();
                    json!({"subset": subset, "weight": w.to_f64()})
                })
                .collect()
        };
        json!({
            "branch": self.branch,
            "constant": self.constant.to_f64(),
            "zero_weights": list(&self.zero_weights),
            "one_weights": list(&self.one_weights),
        })
    }
}

/// Indicator representation of a supermodular order-3 potential with
/// nonnegative weights on every subset of two or more variables.
///
/// With `alpha >= 0` only all-zeros indicators are used: the triple gets
/// `alpha`, each pair its supermodularity with the third variable at 1,
/// and each singleton `psi(v = 0, rest = 1) - psi_111`, over constant
/// `psi_111`. Otherwise the mirror image with all-ones indicators, the
/// third variable at 0 and constant `psi_000`. Weights in `[-eps, 0)` are
/// clamped to zero.
pub fn construct_k3<T: Scalar>(
    psi: &HighOrderPotential<T>,
    eps: T,
) -> Result<IndicatorRepresentation<T>, SubmodularError> {
    if psi.order() != 3 {
        return Err(SubmodularError::BadOrder(psi.order()));
    }
    if let Some(p) = psi.supermodularity_violation(eps) {
        return Err(SubmodularError::NotSupermodular(p.describe(psi.scope())));
    }
    let alpha = psi.alpha();
    let (branch, third, fixed) = if alpha >= T::zero() {
        (Branch::Zeros, 1, 0b111)
    } else {
        (Branch::Ones, 0, 0b000)
    };
    let clamp = |w: T| if w < T::zero() && w >= -eps { T::zero() } else { w };
    let t = psi.table();
    let mut weights = BTreeMap::new();
    weights.insert(vec![0, 1, 2], alpha.abs());
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let s = psi.supermodularity(i, j, &[third]).expect("valid pair");
        weights.insert(vec![i, j], clamp(s));
    }
    for v in 0..3 {
        // Flip variable v away from the all-`fixed` setting.
        let x = fixed ^ (1 << (2 - v));
        weights.insert(vec![v], t[x] - t[fixed]);
    }
    let (zero_weights, one_weights) = match branch {
        Branch::Zeros => (weights, BTreeMap::new()),
        Branch::Ones => (BTreeMap::new(), weights),
    };
    Ok(IndicatorRepresentation {
        branch,
        constant: t[fixed],
        zero_weights,
        one_weights,
    })
}

/// Why no nonnegative indicator representation exists.
#[derive(Debug, Clone, PartialEq)]
pub enum Infeasibility<T> {
    /// Some projection is strictly submodular.
    NotSupermodular(Projection<T>),
    /// For order >= 4 the full-scope terms must satisfy
    /// `alpha = A_X + Z_X` with both nonnegative.
    NegativeAlpha(T),
    /// The exact linear feasibility problem has no solution.
    NoSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility<T> {
    Feasible,
    Infeasible(Infeasibility<T>),
}

impl<T: Scalar> Feasibility<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }

    pub fn to_json(&self, scope: &[String]) -> Value {
        match self {
            Feasibility::Feasible => json!({"feasible": true}),
            Feasibility::Infeasible(Infeasibility::NotSupermodular(p)) => json!({
                "feasible": false,
                "reason": "not_supermodular",
                "witness": {
                    "pair": [scope[p.i], scope[p.j]],
                    "rest": p.rest,
                    "supermodularity": p.value.to_f64(),
                    "text": p.describe(scope),
                },
            }),
            Feasibility::Infeasible(Infeasibility::NegativeAlpha(a)) => json!({
                "feasible": false,
                "reason": "negative_alpha",
                "witness": {"alpha": a.to_f64()},
            }),
            Feasibility::Infeasible(Infeasibility::NoSolution) => json!({
                "feasible": false,
                "reason": "no_solution",
            }),
        }
    }
}

/// Decides whether `psi` equals a constant plus free singleton terms plus
/// nonnegative all-zeros and all-ones indicators on subsets of two or more
/// variables. Cheap necessary conditions are checked first; otherwise the
/// `2^k` evaluation equations are solved exactly.
pub fn representation_feasible<T: Scalar>(
    psi: &HighOrderPotential<T>,
    eps: T,
) -> Result<Feasibility<T>, SubmodularError> {
    let k = psi.order();
    if k > MAX_FEASIBILITY_ORDER {
        return Err(SubmodularError::TooLarge {
            found: k,
            cap: MAX_FEASIBILITY_ORDER,
        });
    }
    if let Some(p) = psi.supermodularity_violation(eps) {
        return Ok(Feasibility::Infeasible(Infeasibility::NotSupermodular(p)));
    }
    let alpha = psi.alpha();
    if k >= 4 && alpha < -eps {
        return Ok(Feasibility::Infeasible(Infeasibility::NegativeAlpha(alpha)));
    }
    Ok(if indicator_system_feasible(psi) {
        Feasibility::Feasible
    } else {
        Feasibility::Infeasible(Infeasibility::NoSolution)
    })
}

/// Builds `A y = psi` over `y >= 0` with columns: constant (+/-), each
/// variable's linear term (+/-), then `Z_Y` and `A_Y` for every subset of
/// size >= 2.
fn indicator_system_feasible<T: Scalar>(psi: &HighOrderPotential<T>) -> bool {
    let k = psi.order();
    let n = 1usize << k;
    let subsets: Vec<usize> = (0..n).filter(|m: &usize| m.count_ones() >= 2).collect();
    let one = BigRational::from_integer(1.into());
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|x| {
            // Mask of variables at 1, in bit positions of the subset masks.
            let mut row = vec![one.clone(), -one.clone()];
            for v in 0..k {
                let on = psi.bit(x, v) == 1;
                let c = if on { one.clone() } else { BigRational::zero() };
                row.push(c.clone());
                row.push(-c);
            }
            let ones: usize = (0..k).filter(|&v| psi.bit(x, v) == 1).map(|v| 1 << v).sum();
            for &y in &subsets {
                let all_zero = y & ones == 0;
                let all_one = y & ones == y;
                row.push(if all_zero { one.clone() } else { BigRational::zero() });
                row.push(if all_one { one.clone() } else { BigRational::zero() });
            }
            row
        })
        .collect();
    let rhs: Vec<BigRational> = psi.table().iter().map(|v| v.to_exact()).collect();
    phase_one_feasible(rows, rhs)
}

/// Exact phase-one simplex with Bland's rule: is `{y >= 0 : A y = b}`
/// non-empty?
fn phase_one_feasible(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> bool {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    for i in 0..m {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for x in &mut a[i] {
                *x = -x.clone();
            }
        }
    }
    // Append one artificial column per row.
    for (i, row) in a.iter_mut().enumerate() {
        row.extend((0..m).map(|j| {
            if i == j {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            }
        }));
    }
    let width = n + m;
    let mut basis: Vec<usize> = (n..width).collect();
    // Objective: sum of artificials = z0 + sum_j d_j y_j over nonbasic j.
    let mut d: Vec<BigRational> = (0..width)
        .map(|j| {
            if j < n {
                -a.iter().map(|row| row[j].clone()).sum::<BigRational>()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let mut z0: BigRational = b.iter().cloned().sum();
    loop {
        let Some(enter) = (0..width).find(|&j| d[j].is_negative()) else {
            return z0.is_zero();
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if a[i][enter].is_positive() {
                let ratio = &b[i] / &a[i][enter];
                let better = match &leave {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // Unbounded descent cannot happen for a sum of nonnegatives.
            unreachable!("phase-one objective is bounded below");
        };
        let pivot = a[r][enter].clone();
        for x in &mut a[r] {
            *x = &*x / &pivot;
        }
        b[r] = &b[r] / &pivot;
        let prow = a[r].clone();
        let prhs = b[r].clone();
        for i in 0..m {
            if i == r || a[i][enter].is_zero() {
                continue;
            }
            let f = a[i][enter].clone();
            for (x, p) in a[i].iter_mut().zip(&prow) {
                *x -= &f * p;
            }
            b[i] -= &f * &prhs;
        }
        let f = d[enter].clone();
        for (x, p) in d.iter_mut().zip(&prow) {
            *x -= &f * p;
        }
        z0 += &f * &prhs;
        basis[r] = enter;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pot(table: &[f64]) -> HighOrderPotential<f64> {
        HighOrderPotential::anonymous(table.to_vec()).unwrap()
    }

    fn footnote_table() -> HighOrderPotential<f64> {
        let mut t = vec![0.0; 16];
        t[0] = 2.0;
        for b in 0..4 {
            t[1 << b] = 1.0;
        }
        pot(&t)
    }

    fn x1x2x3() -> HighOrderPotential<f64> {
        let mut t = vec![0.0; 8];
        t[7] = 1.0;
        pot(&t)
    }

    #[test]
    fn supermodularity_examples() {
        assert_eq!(pot(&[1.0, 0.0, 0.0, 1.0]).supermodularity(0, 1, &[]), Ok(2.0));
        assert_eq!(x1x2x3().supermodularity(0, 1, &[1]), Ok(1.0));
        assert_eq!(x1x2x3().supermodularity(0, 1, &[0]), Ok(0.0));
        assert!(matches!(
            x1x2x3().supermodularity(0, 0, &[1]),
            Err(SubmodularError::BadIndices { .. })
        ));
    }

    #[test]
    fn supermodular_checks() {
        let f = footnote_table();
        assert_eq!(f.projections().len(), 24);
        assert!(f.is_supermodular(0.0));
        let p = pot(&[0.0, 1.0, 1.0, 0.0]).supermodularity_violation(0.0).unwrap();
        assert_eq!(p.value, -2.0);
        assert!(pot(&[0.0; 8]).is_supermodular(0.0));
    }

    #[test]
    fn alpha_values() {
        assert_eq!(pot(&[1.0, 0.0, 0.0, 1.0]).alpha(), 2.0);
        assert_eq!(footnote_table().alpha(), -2.0);
        assert_eq!(x1x2x3().alpha(), -1.0);
    }

    #[test]
    fn construct_examples() {
        let r = construct_k3(&x1x2x3(), 0.0).unwrap();
        assert_eq!(r.branch, Branch::Ones);
        assert_eq!(r.constant, 0.0);
        assert_eq!(r.one_weights[&vec![0, 1, 2]], 1.0);
        assert!(r
            .one_weights
            .iter()
            .filter(|(y, _)| y.len() < 3)
            .all(|(_, &w)| w == 0.0));

        let mut t = vec![0.0; 8];
        t[0] = 1.0;
        let r = construct_k3(&pot(&t), 0.0).unwrap();
        assert_eq!(r.branch, Branch::Zeros);
        assert_eq!(r.zero_weights[&vec![0, 1, 2]], 1.0);
        for x in 0..8 {
            let labels = [x >> 2 & 1, x >> 1 & 1, x & 1];
            assert_eq!(r.evaluate(&labels), t[x]);
        }

        let bad = pot(&[0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            construct_k3(&bad, 0.0),
            Err(SubmodularError::NotSupermodular(_))
        ));
    }

    #[test]
    fn feasibility_examples() {
        assert_eq!(
            representation_feasible(&footnote_table(), 0.0),
            Ok(Feasibility::Infeasible(Infeasibility::NegativeAlpha(-2.0)))
        );
        assert!(representation_feasible(&x1x2x3(), 0.0).unwrap().is_feasible());
        let bad = pot(&[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(
            representation_feasible(&bad, 0.0),
            Ok(Feasibility::Infeasible(Infeasibility::NotSupermodular(_)))
        ));
        // x1 x2 x3 x4 is a single all-ones indicator.
        let mut t = vec![0.0; 16];
        t[15] = 1.0;
        assert!(representation_feasible(&pot(&t), 0.0).unwrap().is_feasible());
    }

    #[test]
    fn simplex_detects_simple_infeasibility() {
        let r = |x: i64| BigRational::from_integer(x.into());
        // y0 + y1 = -1 has no nonnegative solution.
        assert!(!phase_one_feasible(vec![vec![r(1), r(1)]], vec![r(-1)]));
        assert!(phase_one_feasible(vec![vec![r(1), r(-1)]], vec![r(-1)]));
        assert!(phase_one_feasible(
            vec![vec![r(1), r(1), r(0)], vec![r(0), r(1), r(1)]],
            vec![r(2), r(3)]
        ));
    }
}
