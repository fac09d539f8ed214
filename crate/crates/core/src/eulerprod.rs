//! Truncated power series `sum a_d t^d` and combinatorial Euler products
//! `prod_j (1 - t^j)^(-b_j)`.
//!
//! The exponent `b_j` may be any element of a binomial ring; here that means
//! rationals, rational polynomials, or residues modulo a cyclotomic
//! polynomial. `(1 - t^j)^(-b)` is read as `sum_m ((b; m)) t^(jm)` with
//! `((b; m)) = b(b+1)...(b+m-1)/m!`.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{cyclotomic, Poly, Rat, Sign};

/// A commutative `Q`-algebra, given as a context so that the ring can carry
/// parameters such as the modulus of `Q[x]/Phi_m`.
pub trait BinomialRing {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn embed(&self, r: &Rat) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, r: &Rat) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// The rationals.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl BinomialRing for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn embed(&self, r: &Rat) -> Rat {
        r.clone()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn scale(&self, a: &Rat, r: &Rat) -> Rat {
        a * r
    }
}

/// `Q[x]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Polynomials;

impl BinomialRing for Polynomials {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }
    fn embed(&self, r: &Rat) -> Poly {
        Poly::constant(r.clone())
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a - b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a * b
    }
    fn scale(&self, a: &Poly, r: &Rat) -> Poly {
        a.scale(r)
    }
}

/// `Q(zeta_m) = Q[x]/Phi_m`, elements kept as remainders of degree below
/// `phi(m)`.
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    m: u64,
    modulus: Poly,
}

impl CyclotomicField {
    pub fn new(m: u64) -> Result<Self> {
        Ok(CyclotomicField {
            m,
            modulus: (*cyclotomic(m)?).clone(),
        })
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    /// Canonical representative of `f(zeta_m)`.
    pub fn reduce(&self, f: &Poly) -> Poly {
        f.reduce_mod_xm(self.m, Sign::Minus)
            .divrem(&self.modulus)
            .expect("cyclotomic polynomials are nonzero")
            .1
    }

    /// `zeta_m^k`.
    pub fn zeta_pow(&self, k: u64) -> Poly {
        self.reduce(&Poly::monomial(k % self.m, Rat::one()))
    }

    /// The rational value of `a`, if it is rational.
    pub fn as_rational(&self, a: &Poly) -> Option<Rat> {
        a.is_constant().then(|| a.coeff(0))
    }
}

impl BinomialRing for CyclotomicField {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }
    fn embed(&self, r: &Rat) -> Poly {
        Poly::constant(r.clone())
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a - b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&(a * b))
    }
    fn scale(&self, a: &Poly, r: &Rat) -> Poly {
        a.scale(r)
    }
}

/// `((a; n)) = a(a+1)...(a+n-1)/n!` in any binomial ring.
pub fn multichoose_in<R: BinomialRing>(ring: &R, a: &R::Elem, n: u64) -> R::Elem {
    let mut acc = ring.one();
    for i in 0..n {
        let shifted = ring.add(a, &ring.embed(&Rat::from_integer(BigInt::from(i))));
        acc = ring.mul(&acc, &shifted);
        acc = ring.scale(&acc, &Rat::new(BigInt::one(), BigInt::from(i + 1)));
    }
    acc
}

/// `((P; n))` for a rational polynomial `P`.
pub fn multichoose(p: &Poly, n: u64) -> Poly {
    multichoose_in(&Polynomials, p, n)
}

/// A partition of `d`, as (part, multiplicity) pairs with parts descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<(u64, u64)>,
}

impl Partition {
    /// Pairs `(j, m_j)` with `m_j > 0`, largest part first.
    pub fn multiplicities(&self) -> &[(u64, u64)] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|(j, m)| j * m).sum()
    }

    pub fn len(&self) -> u64 {
        self.parts.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parts listed with repetition, largest first.
    pub fn parts(&self) -> Vec<u64> {
        self.parts
            .iter()
            .flat_map(|&(j, m)| std::iter::repeat_n(j, m as usize))
            .collect()
    }

    /// Whether this is the one-part partition `(d)`.
    pub fn is_single_part(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].1 == 1
    }
}

/// Every partition of `d`, in reverse lexicographic order of the part lists
/// (so `(d)` first and `(1^d)` last).
pub fn partitions(d: u64) -> Vec<Partition> {
    fn go(left: u64, max: u64, cur: &mut Vec<(u64, u64)>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for j in (1..=max.min(left)).rev() {
            for m in (1..=left / j).rev() {
                cur.push((j, m));
                go(left - j * m, j - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// A power series `a_0 + a_1 t + ... + a_D t^D` truncated at `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySeries {
    coeffs: Vec<Poly>,
}

impl PolySeries {
    /// Coefficients `a_0..a_D`; must be nonempty.
    pub fn new(coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("a series needs at least a_0".into()));
        }
        Ok(PolySeries { coeffs })
    }

    pub fn from_scalars(coeffs: &[Rat]) -> Result<Self> {
        Self::new(coeffs.iter().cloned().map(Poly::constant).collect())
    }

    /// `1/(1 - x t) = sum x^d t^d`.
    pub fn geometric_x(order: u64) -> Self {
        PolySeries {
            coeffs: (0..=order).map(|d| Poly::monomial(d, Rat::one())).collect(),
        }
    }

    /// Truncation order `D`.
    pub fn order(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn coeff(&self, d: u64) -> &Poly {
        &self.coeffs[d as usize]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Evaluates every coefficient at `q`.
    pub fn eval(&self, q: &Rat) -> Vec<Rat> {
        self.coeffs.iter().map(|a| a.eval(q)).collect()
    }
}

/// `b_lambda = prod_j ((b_j; m_j))`, memoized per `(j, m_j)`.
struct LambdaProducts<'a, R: BinomialRing> {
    ring: &'a R,
    memo: HashMap<(u64, u64), R::Elem>,
}

impl<'a, R: BinomialRing> LambdaProducts<'a, R> {
    fn new(ring: &'a R) -> Self {
        LambdaProducts {
            ring,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, b: &[R::Elem], lambda: &Partition) -> R::Elem {
        let mut acc = self.ring.one();
        for &(j, m) in lambda.multiplicities() {
            let ring = self.ring;
            let factor = self
                .memo
                .entry((j, m))
                .or_insert_with(|| multichoose_in(ring, &b[j as usize - 1], m));
            if ring.is_zero(factor) {
                return ring.zero();
            }
            acc = ring.mul(&acc, factor);
        }
        acc
    }
}

/// `a_0..a_D` of `prod_{j=1}^{D} (1 - t^j)^(-b_j)`, as `a_d = sum over
/// partitions lambda of d of b_lambda`. `b[j - 1]` is `b_j`.
pub fn euler_expand_in<R: BinomialRing>(
    ring: &R,
    b: &[R::Elem],
    order: u64,
) -> Result<Vec<R::Elem>> {
    if (b.len() as u64) < order {
        return Err(Error::HypothesisNotMet(format!(
            "need exponents b_1..b_{order}, got {}",
            b.len()
        )));
    }
    let mut products = LambdaProducts::new(ring);
    let mut out = vec![ring.one()];
    for d in 1..=order {
        let mut a_d = ring.zero();
        for lambda in partitions(d) {
            a_d = ring.add(&a_d, &products.get(b, &lambda));
        }
        out.push(a_d);
    }
    Ok(out)
}

/// The unique `b_1..b_D` with `euler_expand(b) = a`, by
/// `b_d = a_d - sum_{lambda |- d, lambda != (d)} b_lambda`.
pub fn euler_invert_in<R: BinomialRing>(ring: &R, a: &[R::Elem]) -> Result<Vec<R::Elem>> {
    check_leading(ring, a)?;
    let order = a.len() as u64 - 1;
    let mut b: Vec<R::Elem> = Vec::with_capacity(order as usize);
    for d in 1..=order {
        // b_d is only needed for lambda = (d), which is skipped
        b.push(ring.zero());
        let mut products = LambdaProducts::new(ring);
        let mut rest = ring.zero();
        for lambda in partitions(d).into_iter().filter(|l| !l.is_single_part()) {
            rest = ring.add(&rest, &products.get(&b, &lambda));
        }
        b[d as usize - 1] = ring.sub(&a[d as usize], &rest);
    }
    Ok(b)
}

/// Same inversion by peeling off one factor at a time: with
/// `R_{d-1} = prod_{j<d} (1 - t^j)^(-b_j)` we have `b_d = a_d - [t^d] R_{d-1}`.
/// Needs `O(D^2 log D)` ring operations instead of a sum over partitions.
pub fn euler_invert_by_factors<R: BinomialRing>(ring: &R, a: &[R::Elem]) -> Result<Vec<R::Elem>> {
    check_leading(ring, a)?;
    let order = a.len() - 1;
    let mut running: Vec<R::Elem> = vec![ring.zero(); order + 1];
    running[0] = ring.one();
    let mut b = Vec::with_capacity(order);
    for d in 1..=order {
        let b_d = ring.sub(&a[d], &running[d]);
        // multiply by (1 - t^d)^(-b_d) truncated at t^order
        let mut factor: Vec<R::Elem> = vec![ring.one()];
        for m in 1..=(order / d) as u64 {
            let shifted = ring.add(&b_d, &ring.embed(&Rat::from_integer(BigInt::from(m - 1))));
            let next = ring.mul(factor.last().unwrap(), &shifted);
            factor.push(ring.scale(&next, &Rat::new(BigInt::one(), BigInt::from(m))));
        }
        let mut next = vec![ring.zero(); order + 1];
        for (e, r) in running.iter().enumerate() {
            if ring.is_zero(r) {
                continue;
            }
            for (m, f) in factor.iter().enumerate() {
                let k = e + m * d;
                if k > order {
                    break;
                }
                next[k] = ring.add(&next[k], &ring.mul(r, f));
            }
        }
        running = next;
        b.push(b_d);
    }
    Ok(b)
}

fn check_leading<R: BinomialRing>(ring: &R, a: &[R::Elem]) -> Result<()> {
    match a.first() {
        Some(a0) if *a0 == ring.one() => Ok(()),
        Some(a0) => Err(Error::HypothesisNotMet(format!(
            "series must start with a_0 = 1, got {a0:?}"
        ))),
        None => Err(Error::HypothesisNotMet("empty series".into())),
    }
}

/// [`euler_expand_in`] over `Q[x]`.
pub fn euler_expand(b: &[Poly], order: u64) -> Result<PolySeries> {
    PolySeries::new(euler_expand_in(&Polynomials, b, order)?)
}

/// [`euler_invert_in`] over `Q[x]`.
pub fn euler_invert(a: &PolySeries) -> Result<Vec<Poly>> {
    euler_invert_in(&Polynomials, a.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{binomial, frac, rat};
    use crate::necklace::necklace_m;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    // Euler's pentagonal recurrence
    fn partition_numbers(n: usize) -> Vec<i64> {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for i in 1..=n {
            let mut k: i64 = 1;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > i {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                p[i] += sign * p[i - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= i {
                    p[i] += sign * p[i - g2];
                }
                k += 1;
            }
        }
        p
    }

    // C(y, n) = y(y-1)...(y-n+1)/n!
    fn choose_poly(y: &Poly, n: u64) -> Poly {
        let mut acc = Poly::one();
        for i in 0..n {
            acc = &acc * &(y - &Poly::constant(rat(i as i64)));
            acc = acc.scale(&frac(1, i as i64 + 1));
        }
        acc
    }

    #[test]
    fn multichoose_examples() {
        let x = Poly::x();
        assert_eq!(multichoose(&x, 0), Poly::one());
        assert_eq!(multichoose(&Poly::constant(rat(7)), 0), Poly::one());
        assert_eq!(
            multichoose(&x, 2),
            Poly::from_terms([(2, frac(1, 2)), (1, frac(1, 2))])
        );
        for n in 0..10u64 {
            // reciprocity ((x; n)) = (-1)^n C(-x, n)
            let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
            assert_eq!(multichoose(&x, n), choose_poly(&-&x, n).scale(&sign));
            let minus_one = Poly::constant(rat(-1));
            assert_eq!(
                multichoose(&minus_one, n),
                choose_poly(&Poly::one(), n).scale(&sign)
            );
            // ((k; n)) = C(k + n - 1, n) for integers k >= 1
            for k in 1..6u64 {
                let expected = binomial(k + n - 1, n);
                assert_eq!(
                    multichoose(&Poly::constant(rat(k as i64)), n),
                    Poly::constant(Rat::from_integer(BigInt::from(expected)))
                );
            }
        }
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(0).len(), 1);
        assert!(partitions(0)[0].is_empty());
        let four: Vec<Vec<u64>> = partitions(4).iter().map(|p| p.parts()).collect();
        assert_eq!(
            four,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        let p = partition_numbers(30);
        for d in 0..=30u64 {
            let all = partitions(d);
            assert_eq!(all.len() as i64, p[d as usize]);
            assert!(all.iter().all(|l| l.size() == d));
            let unique: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(unique.len(), all.len());
        }
        assert_eq!(partitions(10).len(), 42);
    }

    #[test]
    fn expansion_examples() {
        let ones = vec![Poly::one(); 20];
        let a = euler_expand(&ones, 20).unwrap();
        let p = partition_numbers(20);
        for d in 0..=20 {
            assert_eq!(*a.coeff(d), Poly::constant(rat(p[d as usize])));
        }
        let zeros = vec![Poly::zero(); 8];
        let a = euler_expand(&zeros, 8).unwrap();
        assert_eq!(a.coeff(0), &Poly::one());
        assert!((1..=8).all(|d| a.coeff(d).is_zero()));
        let necklaces: Vec<Poly> = (1..=12).map(|j| necklace_m(j).unwrap()).collect();
        assert_eq!(
            euler_expand(&necklaces, 12).unwrap(),
            PolySeries::geometric_x(12)
        );
    }

    #[test]
    fn inversion_examples() {
        let b = euler_invert(&PolySeries::geometric_x(12)).unwrap();
        for (j, bj) in b.iter().enumerate() {
            assert_eq!(*bj, necklace_m(j as u64 + 1).unwrap());
        }
        let p = partition_numbers(20);
        let a: Vec<Rat> = p.iter().map(|&v| rat(v)).collect();
        let b = euler_invert(&PolySeries::from_scalars(&a).unwrap()).unwrap();
        assert!(b.iter().all(|bj| *bj == Poly::one()));
        let mut unit = vec![rat(0); 9];
        unit[0] = rat(1);
        let b = euler_invert(&PolySeries::from_scalars(&unit).unwrap()).unwrap();
        assert!(b.iter().all(Poly::is_zero));
        assert!(matches!(
            euler_invert(&PolySeries::from_scalars(&[rat(2), rat(1)]).unwrap()),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn plus_minus_one_rederivation() {
        // 1/(1 - t) gives b = (1, 0, 0, ...)
        let b = euler_invert_in(&Rationals, &vec![rat(1); 13]).unwrap();
        assert_eq!(b[0], rat(1));
        assert!(b[1..].iter().all(Zero::is_zero));
        // 1/(1 + t) = (1 - t)/(1 - t^2) gives b = (-1, 1, 0, ...)
        let alt: Vec<Rat> = (0..13)
            .map(|d| rat(if d % 2 == 0 { 1 } else { -1 }))
            .collect();
        let b = euler_invert_in(&Rationals, &alt).unwrap();
        assert_eq!(&b[..2], &[rat(-1), rat(1)]);
        assert!(b[2..].iter().all(Zero::is_zero));
        for d in 1..=12u64 {
            assert_eq!(necklace_m(d).unwrap().eval(&rat(1)), b_of_one(d));
            assert_eq!(necklace_m(d).unwrap().eval(&rat(-1)), b[d as usize - 1]);
        }
    }

    fn b_of_one(d: u64) -> Rat {
        rat((d == 1) as i64)
    }

    #[test]
    fn roots_of_unity_sum() {
        // prod_{k<m} 1/(1 - zeta^k t) = 1/(1 - t^m), so the exponents are delta_{d,m};
        // they are also sum_{e | m} Tr M_d(zeta_e)
        for m in 1..=8u64 {
            let a: Vec<Rat> = (0..=10u64).map(|d| rat((d % m == 0) as i64)).collect();
            let b = euler_invert_in(&Rationals, &a).unwrap();
            for d in 1..=10u64 {
                assert_eq!(b[d as usize - 1], rat((d == m) as i64));
                let traces: Rat = crate::exactmath::divisors(m)
                    .unwrap()
                    .into_iter()
                    .map(|e| crate::necklace::trace_m_at_zeta(d, e).unwrap())
                    .sum();
                assert_eq!(traces, rat((d == m) as i64), "d = {d}, m = {m}");
            }
        }
    }

    #[test]
    fn factor_route_agrees() {
        let a = PolySeries::geometric_x(14);
        assert_eq!(
            euler_invert(&a).unwrap(),
            euler_invert_by_factors(&Polynomials, a.coeffs()).unwrap()
        );
        // 1/(1 - zeta t) has exponents M_j(zeta)
        let field = CyclotomicField::new(5).unwrap();
        let a: Vec<Poly> = (0..=12u64).map(|d| field.zeta_pow(d)).collect();
        let b = euler_invert_by_factors(&field, &a).unwrap();
        assert_eq!(euler_invert_in(&field, &a).unwrap(), b);
        for (j, bj) in b.iter().enumerate() {
            assert_eq!(*bj, field.reduce(&necklace_m(j as u64 + 1).unwrap()));
        }
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-3i64..=3, 0..4).prop_map(|c| Poly::from_coeffs(&c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn roundtrip(b in prop::collection::vec(small_poly(), 1..=10)) {
            let order = b.len() as u64;
            let a = euler_expand(&b, order).unwrap();
            prop_assert_eq!(euler_invert(&a).unwrap(), b.clone());
            prop_assert_eq!(euler_invert_by_factors(&Polynomials, a.coeffs()).unwrap(), b);
        }

        #[test]
        fn specialization_commutes(
            b in prop::collection::vec(small_poly(), 1..=6),
            num in -4i64..=4,
            den in 1i64..=3,
        ) {
            let q = frac(num, den);
            let order = b.len() as u64;
            let a = euler_expand(&b, order).unwrap();
            let scalar = euler_invert_in(&Rationals, &a.eval(&q)).unwrap();
            let evaluated: Vec<Rat> = b.iter().map(|bj| bj.eval(&q)).collect();
            prop_assert_eq!(scalar, evaluated);
        }
    }
}
