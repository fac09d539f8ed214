//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact (tolerance 0). Criteria known to be false as stated are listed in
//! `EXPECTED_FAIL`; the binary exits nonzero only if the set of failing
//! criteria differs from that list.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use necklace_core::eulerprod::{
    euler_expand, euler_invert, euler_invert_in, PolySeries, Rationals,
};
use necklace_core::exactmath::{cyclotomic, frac, rat, reduce_mod_cyclotomic, Poly, Rat, Sign};
use necklace_core::frobenius::{phi_op, FrobElt};
use necklace_core::groups::{
    abelian, all_chains, auto_chain, chain_factorize, cyclic, dihedral, direct_product,
    divisibility_transfer, g_necklace_s, quaternion8, symmetric, FiniteGroup, NormalChain,
    SubgroupLattice,
};
use necklace_core::higher::{
    euler_char, eval_at_zeta_p, m_dn, m_dn_at_sign, m_dn_at_zeta, m_dn_with_budget, macdonald_sum,
    p_at_sign, p_dn, Field,
};
use necklace_core::necklace::{
    divides_xm, necklace_factors, necklace_m, necklace_s, phi_minus_one_divisibility,
    trace_m_at_zeta, verify_conjecture, verify_conjecture_with,
};
use necklace_core::systems::{
    is_system, search_primitive, system_of, system_to_minimal_d, DEFAULT_PRIME_CUTOFF,
};
use num_bigint::BigInt;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

const EXPECTED_FAIL: [u32; 4] = [1, 2, 8, 12];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---- oracles, independent of the library ----

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mu(n: u64) -> i64 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn phi(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn divisors_of(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

fn squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

fn oracle_s(d: u64) -> Poly {
    Poly::from_int_terms(divisors_of(d).into_iter().map(|e| (d / e, mu(e))))
}

fn oracle_m(d: u64) -> Poly {
    oracle_s(d).scale(&frac(1, d as i64))
}

/// Partition numbers by Euler's pentagonal recurrence.
fn partition_numbers(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut k = 1i64;
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

/// Partitions of `d` as lists of (part, multiplicity).
fn partitions_of(d: u64) -> Vec<Vec<(u64, u64)>> {
    fn go(rest: u64, max: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<(u64, u64)>>) {
        if rest == 0 {
            let mut m: Vec<(u64, u64)> = Vec::new();
            for &p in acc.iter() {
                match m.last_mut() {
                    Some((q, c)) if *q == p => *c += 1,
                    _ => m.push((p, 1)),
                }
            }
            out.push(m);
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            acc.push(p);
            go(rest - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// a (a + 1) ... (a + n - 1) / n!
fn rising_binomial(a: &Rat, n: u64) -> Rat {
    (0..n).fold(rat(1), |acc, i| {
        acc * (a + rat(i as i64)) / rat(i as i64 + 1)
    })
}

fn builtin_groups() -> Vec<FiniteGroup> {
    let mut gs = Vec::new();
    for d in 1..=24 {
        gs.push(cyclic(d).unwrap());
    }
    for two_d in (4..=24).step_by(2) {
        gs.push(dihedral(two_d).unwrap());
    }
    gs.push(quaternion8());
    gs.push(symmetric(3).unwrap());
    gs.push(symmetric(4).unwrap());
    for shape in [
        &[2, 2][..],
        &[2, 4],
        &[2, 2, 2],
        &[3, 3],
        &[2, 6],
        &[2, 8],
        &[4, 4],
        &[2, 2, 4],
        &[2, 2, 2, 2],
        &[2, 10],
        &[2, 2, 6],
        &[2, 12],
    ] {
        gs.push(abelian(shape).unwrap());
    }
    let c2 = cyclic(2).unwrap();
    let c3 = cyclic(3).unwrap();
    gs.push(direct_product(&quaternion8(), &c2).unwrap());
    gs.push(direct_product(&dihedral(8).unwrap(), &c2).unwrap());
    gs.push(direct_product(&symmetric(3).unwrap(), &c3).unwrap());
    gs.push(direct_product(&dihedral(8).unwrap(), &c3).unwrap());
    gs.push(direct_product(&quaternion8(), &c3).unwrap());
    gs
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: S) -> S::Value {
    s.new_tree(runner).unwrap().current()
}

fn random_poly(runner: &mut TestRunner, max_exp: u64, len: usize) -> Poly {
    let terms = sample(
        runner,
        proptest::collection::vec((0..=max_exp, -9i64..=9), 0..=len),
    );
    Poly::from_int_terms(terms)
}

fn divisible(f: &Poly, m: u64, sign: Sign) -> bool {
    f.reduce_mod_xm(m, sign).is_zero()
}

// ---- criteria ----

const PRINTED_FORMS: [(u64, &[(u64, i64)]); 5] = [
    (
        105,
        &[
            (105, 1),
            (35, -1),
            (21, -1),
            (15, -1),
            (7, 1),
            (5, 1),
            (3, 1),
            (1, -1),
        ],
    ),
    (10, &[(10, 1), (5, -1), (2, -1), (1, 1)]),
    (243, &[(243, 1), (23, -1), (11, -1), (1, 1)]),
    (
        741,
        &[
            (741, 1),
            (247, -1),
            (57, -1),
            (39, -1),
            (19, 1),
            (13, 1),
            (3, 1),
            (1, -1),
        ],
    ),
    (
        6061,
        &[
            (6061, 1),
            (551, -1),
            (319, -1),
            (209, -1),
            (29, 1),
            (19, 1),
            (11, 1),
            (1, -1),
        ],
    ),
];

fn criterion_1() -> Outcome {
    let mut mismatched = Vec::new();
    for (d, form) in PRINTED_FORMS {
        let scaled = necklace_m(d).unwrap().scale(&rat(d as i64));
        if scaled != Poly::from_int_terms(form.iter().copied()) || scaled != oracle_s(d) {
            mismatched.push(d);
        }
    }
    // The 243 row: its lower terms are those of 253 = 11 * 23.
    let relabelled = Poly::from_int_terms([(253, 1), (23, -1), (11, -1), (1, 1)]);
    let is_253 = necklace_m(253).unwrap().scale(&rat(253)) == relabelled;
    outcome(
        mismatched.is_empty(),
        format!(
            "{}/5 printed forms equal d*M_d; mismatched d = {mismatched:?}; S_243 = {}; the 243 row with x^253 leading equals 253*M_253: {is_253}",
            5 - mismatched.len(),
            necklace_s(243).unwrap()
        ),
    )
}

const PRINTED_FACTORS: [(u64, &[u64], i64); 5] = [
    (105, &[1, 2, 3, 4, 6, 8], 92),
    (10, &[1, 2, 4, 6], 3),
    (243, &[1, 2, 5, 8, 10, 11, 22, 24], 210),
    (741, &[1, 2, 3, 4, 6, 9, 12, 18, 20], 708),
    (
        6061,
        &[1, 2, 3, 4, 5, 6, 7, 9, 10, 12, 14, 15, 18, 20, 28, 30, 60],
        5964,
    ),
];

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for (d, ms, cofactor) in PRINTED_FACTORS {
        let report = necklace_factors(d).unwrap();
        let ok =
            report.factor_ms == ms && report.cofactor_degree == cofactor && report.has_x_factor;
        if !ok {
            bad.push(d);
            notes.push(format!(
                "d = {d} gives {:?} with cofactor degree {}",
                report.factor_ms, report.cofactor_degree
            ));
        }
    }
    let r253 = necklace_factors(253).unwrap();
    let row_is_253 = r253.factor_ms == PRINTED_FACTORS[2].1 && r253.cofactor_degree == 210;
    outcome(
        bad.is_empty(),
        format!(
            "{}/5 factor lists and cofactor degrees exact; {}; the 243 row matches d = 253: {row_is_253}",
            5 - bad.len(),
            if notes.is_empty() { "no mismatch".into() } else { notes.join("; ") }
        ),
    )
}

fn criterion_3() -> Outcome {
    let found = verify_conjecture(60, 1000).unwrap();
    outcome(
        found.is_empty(),
        format!("m <= 60, d <= 1000: {} counterexamples", found.len()),
    )
}

fn criterion_4() -> Outcome {
    let mut bad = 0;
    for d in 1..=40u64 {
        for m in 1..=40u64 {
            let expected = if m % d == 0 { mu(m / d) } else { 0 };
            if trace_m_at_zeta(d, m).unwrap() != rat(expected) {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("1600 pairs, {bad} mismatches"))
}

fn criterion_5() -> Outcome {
    let mut fails = Vec::new();
    let s3 = SubgroupLattice::new(&symmetric(3).unwrap());
    let m_s3 = Poly::from_int_terms([(6, 1), (3, -3), (2, -1), (1, 3)]).scale(&frac(1, 6));
    if s3.m_g() != m_s3 {
        fails.push("M_S3");
    }
    if s3.m_g().eval(&rat(2)) != rat(7) {
        fails.push("M_S3(2)");
    }
    let g = dihedral(20).unwrap();
    let s_d20 = Poly::from_int_terms([(20, 1), (10, -11), (5, 10), (4, -1), (2, 11), (1, -10)]);
    if g_necklace_s(&g) != s_d20 {
        fails.push("S_D20");
    }
    if g_necklace_s(&quaternion8()) != Poly::from_int_terms([(8, 1), (4, -1)]) {
        fails.push("S_Q8");
    }
    // Rotations are ids 0..10, so C10 is the mask 0x3ff.
    let chain = NormalChain::new(&g, vec![0x3ff, g.full_mask()]).unwrap();
    let f = chain_factorize(&g, &chain).unwrap();
    let expected_op = FrobElt::from_terms([(2, 1), (1, -10)]);
    if f.operator != expected_op || !f.verified || expected_op.apply(&oracle_s(10)) != s_d20 {
        fails.push("D20 chain [2] - 10[1]");
    }
    outcome(
        fails.is_empty(),
        if fails.is_empty() {
            "M_S3, M_S3(2) = 7, S_D20, S_Q8 and ([2] - 10[1]) S_10 = S_D20 exact".to_string()
        } else {
            format!("mismatched: {fails:?}")
        },
    )
}

/// Returns (groups, subgroups checked, failures).
fn restriction_identity() -> (usize, usize, usize) {
    let groups = builtin_groups();
    let mut checked = 0;
    let mut failed = 0;
    for g in &groups {
        let lattice = SubgroupLattice::new(g);
        for &k in lattice.subgroups() {
            let index = (g.order() / k.count_ones() as usize) as u64;
            let lhs = lattice.s_of_subgroup(k).unwrap().substitute_power(index);
            let rhs: Poly = lattice
                .subgroups()
                .iter()
                .filter(|&&h| k & h == 1)
                .map(|&h| lattice.s_relative(h).unwrap())
                .sum();
            checked += 1;
            if lhs != rhs {
                failed += 1;
            }
        }
    }
    (groups.len(), checked, failed)
}

fn criterion_6() -> Outcome {
    let (groups, checked, failed) = restriction_identity();
    outcome(
        failed == 0,
        format!("{groups} groups, {checked} subgroups K, {failed} failures"),
    )
}

fn criterion_7() -> Outcome {
    let mut fails = Vec::new();
    let b = euler_invert(&PolySeries::geometric_x(12)).unwrap();
    if b.len() != 12
        || b.iter()
            .enumerate()
            .any(|(i, p)| *p != oracle_m(i as u64 + 1))
    {
        fails.push("1/(1 - xt) does not give M_1..M_12".to_string());
    }
    let p = partition_numbers(20);
    let ones = vec![Poly::one(); 20];
    let expanded = euler_expand(&ones, 20).unwrap();
    if (0..=20).any(|d| *expanded.coeff(d as u64) != Poly::constant(rat(p[d]))) {
        fails.push("b_j = 1 does not expand to p(d)".into());
    }
    let series = PolySeries::from_scalars(&p.iter().map(|&x| rat(x)).collect::<Vec<_>>()).unwrap();
    if euler_invert(&series).unwrap() != ones {
        fails.push("sum p(d) t^d does not invert to b_j = 1".into());
    }
    outcome(
        fails.is_empty(),
        if fails.is_empty() {
            "M_1..M_12 recovered; b_j = 1 <-> a_d = p(d) for d <= 20".to_string()
        } else {
            fails.join("; ")
        },
    )
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let m1 = m_dn(12, 1).unwrap();
    let n1 = (1..=12).all(|d| m1[d as usize - 1] == oracle_m(d));
    pass &= n1;
    notes.push(format!("M_(d,1) = M_d for d <= 12: {n1}"));

    let m12 = m_dn(1, 2).unwrap()[0] == Poly::from_int_terms([(2, 1), (1, 1)]);
    pass &= m12;
    notes.push(format!("M_(1,2) = x^2 + x: {m12}"));

    // 2 = 3 - 1, so the value is -1 at d = 1, 1 at d = 3 and 0 elsewhere.
    let m2 = m_dn(9, 2).unwrap();
    let balanced = (1..=9u64).all(|d| {
        let expected = match d {
            1 => -1,
            3 => 1,
            _ => 0,
        };
        let reduced = reduce_mod_cyclotomic(&m2[d as usize - 1], 3).unwrap();
        reduced == Poly::constant(rat(expected))
            && eval_at_zeta_p(d, 2, 3).unwrap() == rat(expected)
    });
    pass &= balanced;
    notes.push(format!("(n, p) = (2, 3), d <= 9 via Phi_3: {balanced}"));

    let values = m_dn_at_zeta(125, 121, 5).unwrap();
    let mismatches: Vec<u64> = (1..=125u64)
        .filter(|&d| {
            let printed = match d {
                1 | 125 => 1,
                5 => -1,
                _ => 0,
            };
            values[d as usize - 1] != Poly::constant(rat(printed))
        })
        .collect();
    pass &= mismatches.is_empty();
    notes.push(format!(
        "(n, p) = (121, 5) table: {} of 125 values differ (first d: {:?}); M_(1,121)(z) = {}, M_(5,121)(z) = {} in Q[x]/Phi_5 with x = z; 121 = 441 in base 5 has no balanced expansion",
        mismatches.len(),
        &mismatches[..mismatches.len().min(6)],
        values[0],
        values[4]
    ));
    outcome(pass, notes.join("; "))
}

fn criterion_9() -> Outcome {
    let mut pass = true;
    let by_inversion = m_dn_at_sign(32, 13, Field::Real).unwrap();
    for d in 1..=32u64 {
        let printed = match d {
            2 | 16 => 1,
            1 | 4 => -1,
            _ => 0,
        };
        pass &= euler_char(d, 13, Field::Real).unwrap() == printed;
        pass &= by_inversion[d as usize - 1] == rat(printed);
    }
    for n in 1..=40u64 {
        let by_inversion = m_dn_at_sign(4, n, Field::Complex).unwrap();
        pass &= euler_char(1, n, Field::Complex).unwrap() == n as i64;
        pass &= by_inversion[0] == rat(n as i64);
        pass &= (2..=4).all(|d| by_inversion[d - 1] == rat(0));
    }
    outcome(
        pass,
        "chi_c(Irr_(d,13)(R)) for d <= 32 and chi_c(Irr_(1,n)(C)) = n for n <= 40, closed form and scalar inversion",
    )
}

fn criterion_10() -> Outcome {
    let d = 1_247_290;
    let got = necklace_s(d).unwrap().reduce_mod_xm(3, Sign::Minus);
    let expected = Poly::from_int_terms([(1, 32), (2, -32)]);
    // Oracle: fold the exponents d/e of S_d modulo 3 by hand.
    let mut folded = [0i64; 3];
    for e in divisors_of(d) {
        folded[((d / e) % 3) as usize] += mu(e);
    }
    let oracle = Poly::from_int_terms([(0, folded[0]), (1, folded[1]), (2, folded[2])]);
    outcome(
        got == expected && oracle == expected,
        format!("S_1247290 mod x^3 - 1 = {got}"),
    )
}

fn criterion_11() -> Outcome {
    let lib =
        phi_minus_one_divisibility(15, 6061).unwrap() && phi_minus_one_divisibility(3, 7).unwrap();
    let direct = |m: u64, d: u64| {
        let f = &*cyclotomic(d).unwrap() - &Poly::one();
        let g = Poly::from_int_terms((0..m).map(|i| (i, 1)));
        f.divrem(&g).unwrap().1.is_zero()
    };
    let by_division = direct(15, 6061) && direct(3, 7);
    outcome(
        lib && by_division,
        format!("library check {lib}, explicit long division {by_division}"),
    )
}

// ---- criterion 12: every listed invariant ----

type Check = (&'static str, bool, String);
type CheckGroup = (&'static str, Box<dyn Fn(&mut TestRunner) -> Vec<Check>>);
type Criterion = (u32, &'static str, fn() -> Outcome);

fn exactmath_checks(runner: &mut TestRunner) -> Vec<Check> {
    let minus = (1..=200u64).all(|m| {
        let prod = divisors_of(m)
            .into_iter()
            .fold(Poly::one(), |acc, n| &acc * &*cyclotomic(n).unwrap());
        prod == Poly::xm(m, Sign::Minus)
    });
    let plus = (1..=100u64).all(|m| {
        let prod = divisors_of(2 * m)
            .into_iter()
            .filter(|n| m % n != 0)
            .fold(Poly::one(), |acc, n| &acc * &*cyclotomic(n).unwrap());
        prod == Poly::xm(m, Sign::Plus)
    });
    let mut roundtrip = true;
    for _ in 0..300 {
        let f = random_poly(runner, 60, 10);
        let g = random_poly(runner, 20, 5);
        if g.is_zero() {
            continue;
        }
        let (q, r) = f.divrem(&g).unwrap();
        roundtrip &= &(&q * &g) + &r == f;
        roundtrip &= r.is_zero() || r.degree() < g.degree();
    }
    let mut fold = true;
    for m in 1..=50u64 {
        for _ in 0..6 {
            let f = random_poly(runner, 300, 12);
            for sign in [Sign::Minus, Sign::Plus] {
                fold &= f.reduce_mod_xm(m, sign) == f.divrem(&Poly::xm(m, sign)).unwrap().1;
            }
        }
    }
    vec![
        (
            "prod Phi_n over n | m = x^m - 1, m <= 200",
            minus,
            String::new(),
        ),
        (
            "prod Phi_n over n | 2m, n !| m = x^m + 1, m <= 100",
            plus,
            String::new(),
        ),
        (
            "divrem roundtrip on random sparse polynomials",
            roundtrip,
            String::new(),
        ),
        (
            "reduce_mod_xm agrees with division, m <= 50",
            fold,
            String::new(),
        ),
    ]
}

fn random_op(runner: &mut TestRunner) -> FrobElt {
    FrobElt::from_terms(sample(
        runner,
        proptest::collection::vec((1u64..30, -3i64..=3), 1..5),
    ))
}

fn frobenius_checks(runner: &mut TestRunner) -> Vec<Check> {
    let mut hom = true;
    for _ in 0..200 {
        let (a, b) = (random_op(runner), random_op(runner));
        let f = random_poly(runner, 8, 4);
        hom &= (&a * &b).apply(&f) == a.apply(&b.apply(&f));
    }

    // [a] - [a + m t] reduces to zero modulo m.
    let mut lemma1 = true;
    let mut cases = 0;
    for m in 1..=12u64 {
        for _ in 0..4 {
            let pairs = sample(
                runner,
                proptest::collection::vec((1u64..20, 0u64..4, -3i64..=3), 1..4),
            );
            let mut alpha = FrobElt::zero();
            for (a, t, c) in pairs {
                alpha = &alpha + &FrobElt::from_terms([(a, c), (a + m * t, -c)]);
            }
            lemma1 &= alpha.reduce(m).is_zero();
            for _ in 0..50 {
                let f = random_poly(runner, 10, 5);
                lemma1 &= divisible(&alpha.apply(&f), m, Sign::Minus);
            }
            cases += 1;
        }
    }

    // [a] - (-1)^t [a + m t] on odd indices reduces to zero in the signed quotient.
    let mut lemma2 = true;
    for m in 1..=12u64 {
        for _ in 0..4 {
            let pairs = sample(
                runner,
                proptest::collection::vec((0u64..10, 1u64..5, -3i64..=3), 1..4),
            );
            let mut alpha = FrobElt::zero();
            for (a, t, c) in pairs {
                let a = 2 * a + 1;
                let t = if m % 2 == 1 && t % 2 == 1 { t + 1 } else { t };
                let second = if t % 2 == 0 { -c } else { c };
                alpha = &alpha + &FrobElt::from_terms([(a, c), (a + m * t, second)]);
            }
            lemma2 &= alpha.is_odd_supported() && alpha.reduce_signed(m).is_zero();
            for _ in 0..50 {
                let terms = sample(
                    runner,
                    proptest::collection::vec((0u64..6, -9i64..=9), 0..5),
                );
                let f = Poly::from_int_terms(terms.into_iter().map(|(e, c)| (2 * e + 1, c)));
                lemma2 &= divisible(&alpha.apply(&f), m, Sign::Plus);
            }
        }
    }

    let degree_map = (1..=2000u64).all(|d| {
        let total: BigInt = phi_op(d)
            .unwrap()
            .terms()
            .map(|(k, c)| c * BigInt::from(k))
            .sum();
        total == BigInt::from(phi(d))
    });
    vec![
        ("frob_apply is multiplicative", hom, String::new()),
        (
            "reduce(a, m) = 0 => x^m - 1 | a f",
            lemma1,
            format!("{cases} operators x 50 f"),
        ),
        (
            "reduce_signed(a, m) = 0 => x^m + 1 | a f for odd f",
            lemma2,
            String::new(),
        ),
        (
            "phi[d] maps to phi(d), d <= 2000",
            degree_map,
            String::new(),
        ),
    ]
}

fn necklace_checks(runner: &mut TestRunner) -> Vec<Check> {
    const D: u64 = 2000;
    const M: u64 = 60;
    let table: Vec<Vec<[bool; 2]>> = (0..=D)
        .map(|d| {
            if d == 0 {
                return Vec::new();
            }
            let s = oracle_s(d);
            (0..=M)
                .map(|m| {
                    if m == 0 {
                        [false; 2]
                    } else {
                        [divisible(&s, m, Sign::Minus), divisible(&s, m, Sign::Plus)]
                    }
                })
                .collect()
        })
        .collect();
    let lib_agrees = (1..=300u64).all(|d| {
        (1..=M).all(|m| {
            divides_xm(d, m, Sign::Minus).unwrap() == table[d as usize][m as usize][0]
                && divides_xm(d, m, Sign::Plus).unwrap() == table[d as usize][m as usize][1]
        })
    });

    let mut scaling = true;
    for d in 1..=D {
        for m in 1..=30u64 {
            for e in 2..=D / d {
                let de = (d * e) as usize;
                if table[d as usize][m as usize][0] {
                    scaling &= table[de][m as usize][0];
                }
                if e % 2 == 1 && table[d as usize][m as usize][1] {
                    scaling &= table[de][m as usize][1];
                }
            }
        }
    }

    let sqfree = (1..=1000u64).all(|d| {
        let c: u64 = factor(d).iter().map(|&(p, _)| p).product();
        necklace_s(d).unwrap() == necklace_s(c).unwrap().substitute_power(d / c)
    });
    let necessary = (1..=1000u64)
        .all(|d| (1..=M).all(|m| !table[d as usize][m as usize][0] || phi(d).is_multiple_of(m)));
    let one_mod = (2..=500u64)
        .filter(|&p| factor(p) == [(p, 1)])
        .all(|p| (1..=M).all(|m| table[p as usize][m as usize][0] == (p % m == 1 % m)));

    let mut obstruction = true;
    for m in 1..=M {
        for d in divisors_of(m) {
            if squarefree(m / d) {
                obstruction &= !necklace_factors(d).unwrap().factor_ms.contains(&m);
            }
        }
    }

    let mut rational = true;
    let mut constant_cases = 0;
    for m in 1..=40u64 {
        for d in 1..=200u64 {
            let r = reduce_mod_cyclotomic(&necklace_m(d).unwrap(), m).unwrap();
            if r.is_constant() && m % d != 0 {
                constant_cases += 1;
                rational &= r.is_zero();
            }
        }
    }

    let mut implication = true;
    let mut pairs = 0;
    for d in 2..=200u64 {
        for m in 1..=20u64 {
            if !table[d as usize][m as usize][0] {
                continue;
            }
            pairs += 1;
            let op = phi_op(d).unwrap();
            for _ in 0..20 {
                let f = random_poly(runner, 12, 5);
                implication &= Poly::xm(m, Sign::Minus).divides(&op.apply(&f)).unwrap();
            }
        }
    }
    vec![
        (
            "divides_xm matches the folded S_d table, d <= 300, m <= 60",
            lib_agrees,
            String::new(),
        ),
        (
            "scaling by e keeps x^m -+ 1 | S_d, de <= 2000",
            scaling,
            String::new(),
        ),
        ("S_d = S_c(x^(d/c)), d <= 1000", sqfree, String::new()),
        (
            "x^m - 1 | S_d => m | phi(d), d <= 1000, m <= 60",
            necessary,
            String::new(),
        ),
        (
            "x^m - 1 | S_p <=> p = 1 mod m, p <= 500",
            one_mod,
            String::new(),
        ),
        (
            "Phi_m does not divide M_d when d | m, m/d squarefree, m <= 60",
            obstruction,
            String::new(),
        ),
        (
            "constant M_d mod Phi_m with d !| m is 0, m <= 40, d <= 200",
            rational,
            format!("{constant_cases} constant cases"),
        ),
        (
            "x^m - 1 | S_d => x^m - 1 | phi[d] f",
            implication,
            format!("{pairs} pairs x 20 f"),
        ),
    ]
}

fn systems_checks() -> Vec<Check> {
    let mut equivalence = true;
    let mut count = 0;
    for m in 1..=12u64 {
        for signed in [false, true] {
            let sign = if signed { Sign::Plus } else { Sign::Minus };
            for s in search_primitive(m, signed, 3).unwrap() {
                let md = system_to_minimal_d(&s, DEFAULT_PRIME_CUTOFF).unwrap();
                count += 1;
                equivalence &= divides_xm(md.d, m, sign).unwrap();
                equivalence &= divisors_of(md.d)
                    .into_iter()
                    .filter(|&e| e < md.d)
                    .all(|e| !divides_xm(e, m, sign).unwrap());
            }
        }
    }
    let mut converse = true;
    let mut minimal_cases = 0;
    for d in (2..=500u64).filter(|&d| squarefree(d)) {
        for m in 1..=12u64 {
            let minimal = divides_xm(d, m, Sign::Minus).unwrap()
                && divisors_of(d)
                    .into_iter()
                    .filter(|&e| e < d)
                    .all(|e| !divides_xm(e, m, Sign::Minus).unwrap());
            if minimal {
                minimal_cases += 1;
                converse &= is_system(&system_of(d, m, false).unwrap()).unwrap();
            }
        }
    }
    let mut triple = true;
    let mut pairs = 0;
    for m in 1..=12u64 {
        let two_m = 2 * m;
        for s in search_primitive(m, true, 2).unwrap() {
            if s.residues.len() != 2 {
                continue;
            }
            pairs += 1;
            let (p, q) = (s.residues[0], s.residues[1]);
            triple &= (p * q) % two_m == (1 + m) % two_m;
            triple &= p % two_m == (q + m) % two_m;
            triple &= p % two_m != 1 && q % two_m != 1;
        }
    }
    vec![
        (
            "primitive systems give minimal divisors, m <= 12, size <= 3",
            equivalence,
            format!("{count} systems"),
        ),
        (
            "minimal divisors give systems, squarefree d <= 500",
            converse,
            format!("{minimal_cases} cases"),
        ),
        (
            "size-2 signed systems satisfy the congruence triple",
            triple,
            format!("{pairs} systems"),
        ),
    ]
}

fn abelian_shapes(max_product: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, prod: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !acc.is_empty() {
            out.push(acc.clone());
        }
        for d in start..=max / prod {
            acc.push(d);
            go(d, prod * d, max, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(2, 1, max_product, &mut Vec::new(), &mut out);
    out
}

fn pairwise_coprime(ds: &[usize]) -> bool {
    ds.iter()
        .enumerate()
        .all(|(i, &a)| ds[i + 1..].iter().all(|&b| num_integer::gcd(a, b) == 1))
}

fn groups_checks() -> Vec<Check> {
    let cyclic_ok = (1..=30u64).all(|d| {
        let s = g_necklace_s(&cyclic(d as usize).unwrap());
        s == necklace_s(d).unwrap() && s == oracle_s(d)
    });
    let (_, checked, failed) = restriction_identity();

    let shapes = abelian_shapes(32);
    let mut holds = 0;
    let mut fails = Vec::new();
    let mut matches_coprime = true;
    for shape in &shapes {
        let op = shape
            .iter()
            .fold(FrobElt::one(), |acc, &d| &acc * &phi_op(d as u64).unwrap());
        let ok = g_necklace_s(&abelian(shape).unwrap()) == op.apply_to_x();
        matches_coprime &= ok == pairwise_coprime(shape);
        if ok {
            holds += 1;
        } else {
            fails.push(shape.clone());
        }
    }

    let mut transfer = true;
    let mut chains = 0;
    for g in builtin_groups().iter().filter(|g| g.order() > 1) {
        let s = g_necklace_s(g);
        for chain in all_chains(g, 1).unwrap() {
            chains += 1;
            for (p, ok) in divisibility_transfer(g, &chain) {
                transfer &= ok && divisible(&s, p - 1, Sign::Minus);
            }
        }
    }

    let mut local = true;
    for d in 2..=15usize {
        let g = dihedral(2 * d).unwrap();
        let s = g_necklace_s(&g);
        let chain = auto_chain(&g, 1)
            .unwrap()
            .expect("dihedral groups are solvable");
        for (&p, &c) in chain.primes().iter().zip(chain.counts()) {
            if c > 1 {
                let r = s.reduce_mod_xm(p - 1, Sign::Minus);
                local &= r.terms().all(|(_, a)| (a / rat(c as i64 - 1)).is_integer());
            }
        }
    }
    vec![
        ("S_(C_d) = S_d, d <= 30", cyclic_ok, String::new()),
        ("restriction identity on built-ins of order <= 24", failed == 0, format!("{checked} subgroups")),
        (
            "abelian product formula, prod d_i <= 32",
            fails.is_empty(),
            format!(
                "holds for {holds} of {} shapes, fails for {} (first {:?}); holds exactly when the d_i are pairwise coprime: {matches_coprime}",
                shapes.len(),
                fails.len(),
                fails.first()
            ),
        ),
        ("c_i = 1 => x^(p_i - 1) - 1 | S_G", transfer, format!("{chains} chains")),
        ("c_i - 1 divides S_G mod x^(p_i - 1) - 1, dihedral 2d <= 30", local, String::new()),
    ]
}

fn eulerprod_checks(runner: &mut TestRunner) -> Vec<Check> {
    let mut roundtrip = true;
    for _ in 0..30 {
        let order = sample(runner, 1u64..=10);
        let b: Vec<Poly> = (0..order).map(|_| random_poly(runner, 3, 3)).collect();
        roundtrip &= euler_invert(&euler_expand(&b, order).unwrap()).unwrap() == b;
    }

    let mut special = true;
    for _ in 0..20 {
        let order = sample(runner, 1u64..=8);
        let b: Vec<Poly> = (0..order).map(|_| random_poly(runner, 3, 3)).collect();
        let series = euler_expand(&b, order).unwrap();
        let (n, d) = sample(runner, (-5i64..=5, 1i64..=4));
        let q = frac(n, d);
        let scalar = euler_invert_in(&Rationals, &series.eval(&q)).unwrap();
        let poly: Vec<Rat> = euler_invert(&series)
            .unwrap()
            .iter()
            .map(|f| f.eval(&q))
            .collect();
        special &= scalar == poly;
    }

    let ones = PolySeries::from_scalars(&vec![rat(1); 11]).unwrap();
    let alternating = PolySeries::from_scalars(
        &(0..11)
            .map(|d| rat(if d % 2 == 0 { 1 } else { -1 }))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let delta = |j: usize, k: usize| Poly::constant(rat((j == k) as i64));
    let at_one = euler_invert(&ones)
        .unwrap()
        .iter()
        .enumerate()
        .all(|(i, b)| *b == delta(i + 1, 1));
    let at_minus_one = euler_invert(&alternating)
        .unwrap()
        .iter()
        .enumerate()
        .all(|(i, b)| *b == &delta(i + 1, 2) - &delta(i + 1, 1));

    let mut trace = true;
    for m in 1..=8u64 {
        let a: Vec<Rat> = (0..=3 * m).map(|d| rat((d % m == 0) as i64)).collect();
        let b = euler_invert_in(&Rationals, &a).unwrap();
        for d in 1..=3 * m {
            let expected = rat((d == m) as i64);
            trace &= b[d as usize - 1] == expected;
            let sum: Rat = divisors_of(m)
                .into_iter()
                .map(|e| trace_m_at_zeta(d, e).unwrap())
                .sum();
            trace &= sum == expected;
        }
    }
    vec![
        ("invert(expand(b)) = b, D <= 10", roundtrip, String::new()),
        (
            "inversion commutes with x -> q, D <= 8",
            special,
            String::new(),
        ),
        ("1/(1 - t) gives b = (1, 0, ...)", at_one, String::new()),
        (
            "1/(1 + t) gives b = (-1, 1, 0, ...)",
            at_minus_one,
            String::new(),
        ),
        (
            "1/(1 - t^m) gives delta_(d,m) = sum over e | m of T(d, e), m <= 8",
            trace,
            String::new(),
        ),
    ]
}

fn higher_checks() -> Vec<Check> {
    let n1 = m_dn(12, 1)
        .unwrap()
        .iter()
        .enumerate()
        .all(|(i, f)| *f == oracle_m(i as u64 + 1));

    let mut scalar = true;
    for n in 1..=3u64 {
        let ms = m_dn(5, n).unwrap();
        for q in 2..=5i64 {
            let q = rat(q);
            for d in 1..=5u64 {
                let sum: Rat = partitions_of(d)
                    .iter()
                    .map(|lambda| {
                        lambda
                            .iter()
                            .map(|&(j, m)| rising_binomial(&ms[j as usize - 1].eval(&q), m))
                            .fold(rat(1), |acc, x| acc * x)
                    })
                    .sum();
                scalar &= p_dn(d, n).unwrap().eval(&q) == sum;
            }
        }
    }

    const BUDGET: u64 = 20_000;
    let mut balanced = true;
    let mut ranges = Vec::new();
    for (n, p) in [(1u64, 2u64), (2, 3), (4, 5), (6, 7), (3, 2), (13, 2)] {
        let mut d_max = 0;
        while d_max < 24
            && necklace_core::exactmath::binomial(d_max + 1 + n, n)
                <= num_bigint::BigUint::from(BUDGET)
        {
            d_max += 1;
        }
        let ms = m_dn_with_budget(d_max, n, BUDGET).unwrap();
        for d in 1..=d_max {
            let reduced = reduce_mod_cyclotomic(&ms[d as usize - 1], p).unwrap();
            balanced &= reduced == Poly::constant(eval_at_zeta_p(d, n, p).unwrap());
        }
        ranges.push(format!("({n},{p}): d <= {d_max}"));
    }

    let mut macdonald = true;
    for n in 1..=13u64 {
        for field in [Field::Real, Field::Complex] {
            let p = p_at_sign(6, n, field);
            let inverted = m_dn_at_sign(6, n, field).unwrap();
            for d in 1..=6u64 {
                macdonald &= macdonald_sum(d, n, field).unwrap() == p[d as usize];
                macdonald &= inverted[d as usize - 1] == rat(euler_char(d, n, field).unwrap());
            }
        }
    }

    let x_minus_one = (1..=3u64).all(|n| {
        m_dn(8, n)
            .unwrap()
            .iter()
            .skip(1)
            .all(|f| f.eval(&rat(1)) == rat(0))
    });
    vec![
        ("M_(d,1) = M_d, d <= 12", n1, String::new()),
        (
            "P_(d,n)(q) from the partition sum, q <= 5, d <= 5, n <= 3",
            scalar,
            String::new(),
        ),
        (
            "Phi_p reduction of M_(d,n) equals the closed form",
            balanced,
            ranges.join(", "),
        ),
        (
            "symmetric power sums equal P_(d,n)(-+1), d <= 6, n <= 13",
            macdonald,
            String::new(),
        ),
        (
            "M_(d,n)(1) = 0 for 1 < d <= 8, n <= 3",
            x_minus_one,
            String::new(),
        ),
    ]
}

fn determinism_checks() -> Vec<Check> {
    let one = verify_conjecture_with(30, 300, 1).unwrap();
    let four = verify_conjecture_with(30, 300, 4).unwrap();
    let pool = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
    };
    let run = |n| {
        pool(n).install(|| {
            (
                necklace_factors(6061).unwrap(),
                search_primitive(12, true, 3)
                    .unwrap()
                    .iter()
                    .map(|s| s.residues.clone())
                    .collect::<Vec<_>>(),
            )
        })
    };
    vec![(
        "results identical with 1 and 4 workers",
        one == four && run(1) == run(4),
        String::new(),
    )]
}

fn criterion_12() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let groups: [CheckGroup; 8] = [
        ("exactmath", Box::new(exactmath_checks)),
        ("frobenius", Box::new(frobenius_checks)),
        ("necklace", Box::new(necklace_checks)),
        ("systems", Box::new(|_| systems_checks())),
        ("groups", Box::new(|_| groups_checks())),
        ("eulerprod", Box::new(eulerprod_checks)),
        ("higher", Box::new(|_| higher_checks())),
        ("determinism", Box::new(|_| determinism_checks())),
    ];
    let mut checks = Vec::new();
    for (module, run) in &groups {
        let start = Instant::now();
        let found = run(&mut runner);
        println!("  {module} [{:.1}s]", start.elapsed().as_secs_f64());
        for (name, ok, note) in &found {
            let note = if note.is_empty() {
                String::new()
            } else {
                format!(" ({note})")
            };
            println!("    {} {name}{note}", if *ok { "ok  " } else { "FAIL" });
        }
        checks.extend(found);
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.1).collect();
    outcome(
        failed.is_empty(),
        format!(
            "{} of {} properties hold; failing: {:?}",
            checks.len() - failed.len(),
            checks.len(),
            failed.iter().map(|c| c.0).collect::<Vec<_>>()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "printed d*M_d forms", criterion_1),
        (2, "cyclotomic factor tables", criterion_2),
        (3, "conjecture harness", criterion_3),
        (4, "trace formula", criterion_4),
        (5, "group examples", criterion_5),
        (6, "restriction identity", criterion_6),
        (7, "Euler products", criterion_7),
        (8, "higher necklaces", criterion_8),
        (9, "Euler characteristics", criterion_9),
        (10, "local factors", criterion_10),
        (11, "Phi_d - 1 divisibility", criterion_11),
        (12, "property suites", criterion_12),
    ];
    let mut failing = BTreeSet::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {id:>2} {} {name} [{:.1}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failing.insert(id);
        }
    }
    let expected: BTreeSet<u32> = EXPECTED_FAIL.into_iter().collect();
    if failing == expected {
        println!("acceptance: failures are exactly the documented ones {EXPECTED_FAIL:?}");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing {failing:?}, documented {EXPECTED_FAIL:?}");
        ExitCode::FAILURE
    }
}
