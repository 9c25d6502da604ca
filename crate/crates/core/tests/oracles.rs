//! Cross-checks against small, independently written reference computations.

use qcodes_core::duadic::{self, DuadicTower};
use qcodes_core::exec::Exec;
use qcodes_core::field::{make_field, SubfieldEmbedding};
use qcodes_core::gf2::BitPoly;
use qcodes_core::poly_code::{self, DualMode};
use qcodes_core::quantum;

/// Schoolbook product mod a monic polynomial, coefficients low to high.
fn naive_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let d = f.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (d..prod.len()).rev() {
        let c = prod[i];
        if c != 0 {
            for k in 0..=d {
                prod[i - d + k] = (prod[i - d + k] + (p - c) * f[k]) % p;
            }
        }
    }
    prod.truncate(d);
    prod.resize(d, 0);
    prod
}

#[test]
fn multiplication_matches_schoolbook() {
    for (p, d) in [(2u64, 4u32), (3, 3), (2, 8), (5, 2), (3, 6), (2, 11)] {
        let f = make_field(p, d).unwrap();
        let poly = f.defining_poly().to_vec();
        let step = (f.order() as usize / 300).max(1);
        let elems: Vec<_> = f.elements().step_by(step).collect();
        for &a in &elems {
            for &b in elems.iter().step_by(7) {
                let want = naive_mulmod(&f.coeffs(a), &f.coeffs(b), &poly, p as u32);
                assert_eq!(f.coeffs(f.mul(a, b)), want, "F_{p}^{d}");
            }
        }
    }
}

/// Monic degree-d polynomials in the canonical order: `c_0` most significant
/// (starting at 1), `c_{d-1}` least significant.
fn canonical_candidates(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(d as u32);
    (0..total).filter_map(move |mut idx| {
        let mut c = vec![0u32; d];
        for i in (0..d).rev() {
            c[i] = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        (c[0] != 0).then(|| {
            c.push(1);
            c
        })
    })
}

fn x_order(f: &[u32], p: u32) -> u64 {
    let d = f.len() - 1;
    let mut y = vec![0u32; d];
    y[1 % d] = if d == 1 { (p - f[0]) % p } else { 1 };
    let x = y.clone();
    let mut one = vec![0u32; d];
    one[0] = 1;
    let mut k = 1;
    while y != one {
        y = naive_mulmod(&y, &x, f, p);
        k += 1;
        if k > (p as u64).pow(d as u32) {
            return 0;
        }
    }
    k
}

#[test]
fn defining_polynomial_is_first_primitive() {
    for (p, d) in [(2u32, 2usize), (2, 4), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2), (2, 8)] {
        let group = (p as u64).pow(d as u32) - 1;
        let first = canonical_candidates(p, d)
            .find(|f| x_order(f, p) == group)
            .unwrap();
        let field = make_field(p as u64, d as u32).unwrap();
        assert_eq!(field.defining_poly(), first.as_slice(), "F_{p}^{d}");
        assert_eq!(field.element_order(field.primitive_element()).unwrap(), group);
    }
}

#[test]
fn subfield_embedding_is_a_homomorphism() {
    for (ambient, sub) in [((2u64, 8u32), 4u32), ((2, 8), 2), ((3, 6), 2), ((3, 6), 3)] {
        let big = make_field(ambient.0, ambient.1).unwrap();
        let small = make_field(ambient.0, sub).unwrap();
        let e = SubfieldEmbedding::new(&big, &small).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e.embed(small.mul(a, b)), big.mul(e.embed(a), e.embed(b)));
                assert_eq!(e.embed(small.add(a, b)), big.add(e.embed(a), e.embed(b)));
            }
            assert_eq!(e.restrict(e.embed(a)), Some(a));
        }
    }
}

#[test]
fn classic_factorization_of_x7_minus_1() {
    let factors = duadic::binary_cyclotomic_factors(7, 1, Exec::Sequential).unwrap();
    let mut polys: Vec<String> = factors.iter().map(|f| f.poly.to_string()).collect();
    polys.sort();
    assert_eq!(polys, vec!["x + 1", "x^3 + x + 1", "x^3 + x^2 + 1"]);
    // d_10 has root ω with orbit {1, 2, 4}.
    let t = DuadicTower::new(7, 1, Exec::Sequential).unwrap();
    let d10 = t.generator(1, 0).unwrap();
    let w = &t.omega;
    let value = d10
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 1)
        .fold(BitPoly::zero(), |acc, (i, _)| acc.add(&t.field.pow_u64(w, i as u64)));
    assert!(value.is_zero());
}

#[test]
fn order_routes_agree() {
    for (p, n) in [(7u64, 1u32), (7, 2), (23, 1), (31, 1)] {
        let t = DuadicTower::new(p, n, Exec::default()).unwrap();
        let pn = t.pn();
        for f in &t.factors {
            let direct = duadic::poly_order(&f.poly, pn).unwrap();
            assert_eq!(direct, t.factor_root_order(f));
            if f.poly.degree().unwrap() <= 12 {
                assert_eq!(duadic::poly_order_search(&f.poly, 1 << 14).unwrap(), direct);
            }
        }
        for m in 1..=n {
            let d = t.generator(m, 0).unwrap();
            let parts: Vec<&BitPoly> = t.level_factors(m, 0).iter().map(|f| &f.poly).collect();
            assert_eq!(duadic::poly_order(&d, pn).unwrap(), p.pow(m));
            assert_eq!(duadic::poly_order_lcm(&parts, pn).unwrap(), p.pow(m));
        }
    }
}

#[test]
fn hermitian_dual_prediction_on_table_settings() {
    for (q, m, c) in [(16u64, 85u64, 73u64), (9, 104, 94), (4, 255, 241)] {
        let ctx = poly_code::make_context(q, m).unwrap();
        let sel = ctx.selection_from_cutoff(c).unwrap();
        let r = poly_code::verify_duality(&ctx, &sel, DualMode::Hermitian, Exec::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.dim_code + r.dim_dual, ctx.n);
    }
}

/// The published table lists, for each distance bound, the cutoff with the
/// largest dimension, except for one row at (9, 104).
#[test]
fn published_selection_versus_pareto_rows() {
    let rows = quantum::table_search(9, 104, Exec::default()).unwrap();
    let best: Vec<(u64, u64, u64)> = quantum::pareto_rows(&rows)
        .iter()
        .map(|r| (r.cutoff().unwrap(), r.k, r.d))
        .collect();
    assert_eq!(best, vec![(89, 10, 6), (90, 12, 5), (94, 16, 4), (98, 22, 3), (101, 28, 2)]);
}
