//! End-to-end acceptance suite. Each criterion runs the library check from
//! `reproduce` and, alongside it, an oracle written here without reusing the
//! code path under test. Runs without the test harness so the one line per
//! criterion is always printed; exits nonzero if any line is red.

use std::process::ExitCode;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use omn_core::algebra::{Algebra, Element, Monomial};
use omn_core::entropy;
use omn_core::function_ring::PiecewiseFunction;
use omn_core::group_actions::{self, Token};
use omn_core::ktheory::{self, FgAbelianGroup, IntMatrix, Parity};
use omn_core::numbers::{coeff_int, coeff_real, rat};
use omn_core::random;
use omn_core::representations::solenoid_periodic_points;
use omn_core::reproduce::{self, FIXED_POINT_SAMPLES, SLOPE_TOLERANCE};
use omn_core::rieffel::{self, ProjectionData};

const SEED: u64 = 20_240_917;

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.notes.push(what.into());
        }
        self.passed &= ok;
    }
}

/// `|{x in Z_N : (1 - c) x = 0}| = gcd(1 - c, N)`.
fn scalar_hom_count(c: i64, modulus: u64) -> u64 {
    ((1 - c).unsigned_abs()).gcd(&modulus)
}

fn kgroup_oracle(out: &mut Outcome) {
    for m in 1..=12u32 {
        for n in 1..=12u32 {
            if m.gcd(&n) != 1 || (m, n) == (1, 1) {
                continue;
            }
            let k = ktheory::six_term_kgroups(m, n).unwrap();
            // K_0 = coker(1 - n) + ker(1 - m), so Hom(K_0, Z_N) has
            // gcd(n - 1, N) elements, times N when m = 1.
            for big_n in [2u64, 3, 4, 6, 10, 12] {
                let h0 = scalar_hom_count(n as i64, big_n) * if m == 1 { big_n } else { 1 };
                let h1 = scalar_hom_count(m as i64, big_n) * if n == 1 { big_n } else { 1 };
                let (h0, h1) = (BigInt::from(h0), BigInt::from(h1));
                out.check(
                    k.k0.hom_count(big_n) == h0 && k.k1.hom_count(big_n) == h1,
                    format!("({m},{n}) Hom(-, Z_{big_n}) counts disagree with the scalar oracle"),
                );
            }
        }
    }
}

/// Midpoint rule on cells of width 1/64; exact for piecewise-linear
/// functions whose breakpoints are multiples of 1/8.
fn midpoint_integral(f: &PiecewiseFunction) -> BigRational {
    let cells = 64i64;
    (0..cells).map(|i| f.eval_exact(&rat(2 * i + 1, 2 * cells)).unwrap()).fold(BigRational::zero(), |a, b| a + b)
        / BigRational::from_integer(cells.into())
}

/// Winding number of `exp(2 pi i f)` for a real `f` on `[0, 1)` from samples:
/// continuous increments add up, jumps are skipped.
fn sampled_winding(f: &PiecewiseFunction, grid: usize) -> f64 {
    let vals: Vec<f64> = (0..=grid).map(|i| f.eval(i as f64 / grid as f64 % 1.0).re).collect();
    let vals: Vec<f64> = vals[..grid].iter().copied().chain([vals[0]]).collect();
    vals.windows(2).map(|w| w[1] - w[0]).filter(|d| d.abs() < 0.1).sum()
}

fn projection_oracle(out: &mut Outcome) {
    let d = ProjectionData::canonical();
    let trace = (midpoint_integral(&d.a0) + midpoint_integral(&d.b0)) / BigRational::from_integer(2.into());
    out.check(trace == rat(7, 16), format!("midpoint trace {trace}"));
    out.check(rieffel::kms_trace(&d).unwrap() == rat(7, 16), "kms_trace is not 7/16");
    let wa = sampled_winding(&d.a0.mul(&d.delta1).unwrap().dilate(2).unwrap(), 1 << 14);
    let wb = sampled_winding(&d.b0.mul(&d.delta2).unwrap().dilate(2).unwrap(), 1 << 14);
    out.check((wa + wb + 4.0).abs() < 1e-6, format!("sampled winding {wa} + {wb}"));
    out.check(rieffel::k0_class(&d).unwrap() == BigInt::from(-4), "k0_class is not -4");
}

fn fixed_point_oracle(out: &mut Outcome) {
    for (m, n) in [(1u32, 3u32), (2, 5), (3, 5)] {
        let alg = Algebra::new(m, n).unwrap();
        let d = (n as i64 - m as i64).abs();
        let mut rng = random::rng(SEED ^ 0x5eed);
        for _ in 0..FIXED_POINT_SAMPLES / 10 {
            let mut mon = random::monomial(&mut rng, alg.params, 3, 6);
            mon.k -= group_actions::beta_weight(&alg, &mon).unwrap();
            let word = group_actions::fixed_point_rewrite(&alg, &mon).unwrap();
            let creates = word.tokens.iter().filter(|t| **t == Token::Create).count();
            let annihilates = word.tokens.iter().filter(|t| **t == Token::Annihilate).count();
            out.check(
                creates == mon.mu.len() && annihilates == mon.nu.len(),
                format!("{mon}: token counts {creates}/{annihilates}"),
            );
            // Expanding by hand: z^a S_1 acts as S_{a mod n + 1} z^{m (a div n)}.
            let mut prefix = Vec::new();
            let mut carry = 0i64;
            let mut tokens = word.tokens.iter();
            while let Some(Token::Z(a)) = tokens.next() {
                out.check(a % d == 0, format!("{mon}: exponent {a} not divisible by {d}"));
                if tokens.next() != Some(&Token::Create) {
                    carry += a;
                    break;
                }
                let total = carry + a;
                prefix.push(total.rem_euclid(n as i64) as u32 + 1);
                carry = m as i64 * total.div_euclid(n as i64);
            }
            out.check(prefix == mon.mu.letters(), format!("{mon}: creation letters {prefix:?}"));
        }
    }
}

fn witness_oracle(out: &mut Outcome) {
    // The Cuntz sum of the z^k witnesses telescopes to sum_l S_l S_l^*.
    for (m, n) in [(1u32, 2u32), (2, 3)] {
        let alg = Algebra::new(m, n).unwrap();
        for k in (1..=7u64).filter(|k| k.gcd(&(n as u64)) == 1) {
            let r = group_actions::subalgebra_witness_zk(&alg, k, 1000).unwrap();
            let mut ls: Vec<u64> = r.l_table.iter().map(|x| x.0).collect();
            ls.sort_unstable();
            out.check(ls == (0..n as u64).collect::<Vec<_>>(), format!("({m},{n}) k={k}: residues {ls:?}"));
        }
    }
}

/// Counts `x` in `(Z_N)^3` with `x^T M = 0 mod N`, written out for 3x3.
fn hom_count_3x3(rows: &[Vec<i64>], modulus: i64) -> u64 {
    let mut count = 0;
    for a in 0..modulus {
        for b in 0..modulus {
            for c in 0..modulus {
                let x = [a, b, c];
                if (0..3).all(|j| (0..3).map(|i| x[i] * rows[i][j]).sum::<i64>().rem_euclid(modulus) == 0) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn fixed_point_k_oracle(out: &mut Outcome) {
    for parity in [Parity::Odd, Parity::Even] {
        for n in 2..=5u32 {
            let report = ktheory::crossed_product_kgroups(parity, n).unwrap();
            for big_n in 2..=12i64 {
                let brute = hom_count_3x3(&report.matrix, big_n);
                out.check(
                    report.k0.hom_count(big_n as u64) == BigInt::from(brute),
                    format!("{parity:?} n={n}: Hom(K_0, Z_{big_n}) brute force {brute}"),
                );
            }
            let m = IntMatrix::from_i64(&report.matrix).unwrap();
            out.check(ktheory::snf_consistent(&m), format!("{parity:?} n={n}: SNF inconsistent"));
        }
    }
    for n in 2..=10u32 {
        let r = ktheory::crossed_product_kgroups(Parity::Odd, n).unwrap();
        let z = FgAbelianGroup::free(1);
        let t = FgAbelianGroup::cyclic(n - 1);
        out.check(r.k0 == z.direct_sum(&t).direct_sum(&t) && r.k1 == z, format!("odd n={n}: {} / {}", r.k0, r.k1));
    }
    let even = ktheory::crossed_product_kgroups(Parity::Even, 3).unwrap();
    out.check(even.flag.is_some(), "even case is not flagged");
}

fn solenoid_oracle(out: &mut Outcome) {
    // Points with x^{m^k} = x are the (m^k - 1)-th roots of unity; keep those
    // whose orbit under x -> x^m has exact length k.
    for m in [2u64, 3] {
        for k in 1..=4u32 {
            let md = m.pow(k) - 1;
            let exact = (0..md)
                .filter(|&c| (1..k).all(|j| (c * m.pow(j)) % md.max(1) != c % md.max(1)))
                .count();
            let points = solenoid_periodic_points(m, k).unwrap();
            out.check(points.len() == exact, format!("|Per_{k}| for m={m}: {} vs {exact}", points.len()));
        }
    }
}

fn entropy_oracle(out: &mut Outcome) {
    // D_N = (5 * 2^N - 4) / 2 for n = 2 and (4 * 3^N - 3) / 3 for n = 3.
    let closed = |n: u32, big_n: u32| -> usize {
        match n {
            2 => (5 * 2usize.pow(big_n) - 4) / 2,
            _ => (4 * 3usize.pow(big_n) - 3) / 3,
        }
    };
    for (n, n_max) in [(2u32, 8usize), (3, 6)] {
        let table = entropy::entropy_estimate(&Algebra::new(1, n).unwrap(), 0, n_max, 100_000).unwrap();
        for row in &table.rows {
            out.check(
                row.dimension == closed(n, row.n_iter as u32),
                format!("(1,{n}) N={}: D_N = {} vs {}", row.n_iter, row.dimension, closed(n, row.n_iter as u32)),
            );
        }
        let target = (n as f64).ln();
        let last: Vec<f64> = (n_max - 2..=n_max)
            .map(|k| ((closed(n, k as u32) as f64).ln() - (closed(n, k as u32 - 1) as f64).ln() - target).abs() / target)
            .collect();
        out.check(last.iter().all(|e| *e < SLOPE_TOLERANCE), format!("(1,{n}) closed-form slope errors {last:?}"));
    }
}

fn invariant_oracle(out: &mut Outcome) {
    // φ(S_μ S_μ^*) = n^{-|μ|}, and the KMS identity on a pair evaluated by hand.
    for n in [2u32, 3, 5] {
        let alg = Algebra::new(1, n).unwrap();
        for len in 0..=3usize {
            for mu in omn_core::algebra::Word::all_of_length(n, len) {
                let p = Element::from(Monomial::new(mu.clone(), 0, mu.clone()));
                let expected = coeff_real(rat(1, (n as i64).pow(len as u32)));
                out.check(alg.kms_state(&p) == expected, format!("φ(S_{mu} S_{mu}^*) for n={n}"));
            }
        }
        let x = Element::from(Monomial::s(1));
        let y = Element::from(Monomial::s_star(1));
        // x = S_1, y = S_1^*: φ(xy) = n^{deg y} φ(yx) = 1/n.
        let lhs = alg.kms_state(&alg.mul(&x, &y));
        let rhs = alg.kms_state(&alg.mul(&y, &x)) * coeff_real(rat(1, n as i64));
        out.check(lhs == rhs && alg.kms_state(&alg.mul(&y, &x)) == coeff_int(1), format!("KMS pair for n={n}"));
    }
}

fn shape_oracle(out: &mut Outcome) {
    // ρ_1(S_1 S_1^*) at (1,2) is e_11 ⊗ 1.
    let alg = Algebra::new(1, 2).unwrap();
    let rep = entropy::rho_r(&alg, &Monomial::one(), 0, 1, 1).unwrap();
    out.check(rep.exponents == vec![0] && rep.nonzero_entries == 2, format!("ρ_1(Φ(1)) {rep:?}"));
    let m = entropy::rho_matrix(&alg, &Element::from(Monomial::new(vec![1], 0, vec![1])), 1);
    out.check(m.len() == 1, format!("ρ_1(S_1 S_1^*) has {} entries", m.len()));
}

type Oracle = fn(&mut Outcome);

fn main() -> ExitCode {
    let oracles: [Oracle; 9] = [
        kgroup_oracle,
        projection_oracle,
        fixed_point_oracle,
        witness_oracle,
        fixed_point_k_oracle,
        solenoid_oracle,
        entropy_oracle,
        invariant_oracle,
        shape_oracle,
    ];
    let mut all = true;
    for (i, oracle) in oracles.iter().enumerate() {
        let id = i as u8 + 1;
        let result = reproduce::run_criterion(id, SEED).expect("criterion runs");
        let mut out = Outcome::new();
        oracle(&mut out);
        let passed = result.passed && out.passed;
        all &= passed;
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!("criterion {id}: {verdict}  {} ({} ms)", result.title, result.elapsed_ms);
        if !passed {
            for d in result.details.iter().filter(|d| d.starts_with("[FAIL]")) {
                println!("    {d}");
            }
            for n in &out.notes {
                println!("    oracle: {n}");
            }
        }
    }
    if all {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
