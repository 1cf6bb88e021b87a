//! Brute-force oracles written against plain integer arithmetic, independent
//! of the Cayley tables and fast paths in the library.

use urcorner::{
    classify, make_matrix_ring, make_product_ring, make_triangular_ring, make_zmod, parse_ring_spec, regular_witness,
    ur_set, Element, FiniteRing, Limits, RegularityKind,
};

fn el(c: u32) -> Element {
    Element::from_code(c)
}

fn ring(spec: &str) -> FiniteRing {
    parse_ring_spec(spec).unwrap().instantiate(&Limits::default()).unwrap()
}

/// 2x2 matrices over Z/n as `[a, b, c, d]`, row major.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct M2 {
    n: u32,
    m: [u32; 4],
}

impl M2 {
    fn all(n: u32) -> impl Iterator<Item = M2> {
        (0..n.pow(4)).map(move |c| M2::decode(n, c))
    }

    fn decode(n: u32, mut c: u32) -> M2 {
        let mut m = [0; 4];
        for slot in m.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        M2 { n, m }
    }

    fn code(&self) -> u32 {
        self.m.iter().fold(0, |acc, &x| acc * self.n + x)
    }

    fn mul(&self, o: &M2) -> M2 {
        let (a, b) = (self.m, o.m);
        let n = self.n;
        M2 {
            n,
            m: [
                (a[0] * b[0] + a[1] * b[2]) % n,
                (a[0] * b[1] + a[1] * b[3]) % n,
                (a[2] * b[0] + a[3] * b[2]) % n,
                (a[2] * b[1] + a[3] * b[3]) % n,
            ],
        }
    }

    fn add(&self, o: &M2) -> M2 {
        let n = self.n;
        M2 { n, m: [0, 1, 2, 3].map(|i| (self.m[i] + o.m[i]) % n) }
    }

    fn one(n: u32) -> M2 {
        M2 { n, m: [1 % n, 0, 0, 1 % n] }
    }
}

fn naive_m2_units(n: u32) -> Vec<u32> {
    let all: Vec<M2> = M2::all(n).collect();
    let one = M2::one(n);
    let mut units: Vec<u32> =
        all.iter().filter(|x| all.iter().any(|y| x.mul(y) == one && y.mul(x) == one)).map(|x| x.code()).collect();
    units.sort();
    units
}

fn naive_m2_idempotents(n: u32) -> Vec<u32> {
    M2::all(n).filter(|x| x.mul(x) == *x).map(|x| x.code()).collect()
}

#[test]
fn m2_arithmetic_matches_schoolbook() {
    for n in [2, 3] {
        let r = make_matrix_ring(2, &make_zmod(n).unwrap(), &Limits::default()).unwrap();
        assert_eq!(r.size(), n.pow(4));
        assert_eq!(r.one(), el(M2::one(n).code()));
        for x in M2::all(n) {
            for y in M2::all(n) {
                assert_eq!(r.mul(el(x.code()), el(y.code())), el(x.mul(&y).code()));
                assert_eq!(r.add(el(x.code()), el(y.code())), el(x.add(&y).code()));
            }
        }
    }
}

#[test]
fn m2_unit_counts() {
    let m2z2 = ring("M2(Z2)");
    let units: Vec<u32> = m2z2.unit_group().units().map(|u| u.code()).collect();
    assert_eq!(units, naive_m2_units(2));
    assert_eq!(units.len(), 6);

    let m2z3 = ring("M2(Z3)");
    assert_eq!(m2z3.size(), 81);
    let units: Vec<u32> = m2z3.unit_group().units().map(|u| u.code()).collect();
    assert_eq!(units, naive_m2_units(3));
    assert_eq!(units.len(), 48);
}

#[test]
fn m2_idempotent_counts() {
    let m2z2 = ring("M2(Z2)");
    let idem: Vec<u32> = m2z2.idempotents().iter().map(|i| i.e().code()).collect();
    assert_eq!(idem, naive_m2_idempotents(2));
    assert_eq!(idem.len(), 8);
    let m2z3 = ring("M2(Z3)");
    let idem: Vec<u32> = m2z3.idempotents().iter().map(|i| i.e().code()).collect();
    assert_eq!(idem, naive_m2_idempotents(3));
}

#[test]
fn triangular_units_are_diagonal_units() {
    for n in [2u32, 3, 4] {
        let r = make_triangular_ring(2, &make_zmod(n).unwrap(), &Limits::default()).unwrap();
        assert_eq!(r.size(), n.pow(3));
        // slots (0,0), (0,1), (1,1), first most significant
        let unit = |x: u32| (1..n).any(|y| x * y % n == 1 % n) || n == 1;
        let mut expected = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    if unit(a) && unit(d) {
                        expected.push((a * n + b) * n + d);
                    }
                }
            }
        }
        let got: Vec<u32> = r.unit_group().units().map(|u| u.code()).collect();
        assert_eq!(got, expected, "T2(Z{n})");
    }
}

#[test]
fn product_units_are_pairs_of_units() {
    let r = ring("Z2xZ4");
    let got: Vec<u32> = r.unit_group().units().map(|u| u.code()).collect();
    assert_eq!(got, vec![5, 7]);
    let r = make_product_ring(&make_zmod(3).unwrap(), &make_zmod(5).unwrap(), &Limits::default()).unwrap();
    for x in r.elements() {
        let c = x.code();
        let (p, q) = (c / 5, c % 5);
        assert_eq!(r.is_unit(x).is_some(), p != 0 && q != 0, "{c}");
    }
}

#[test]
fn zmod_units_match_gcd() {
    for n in 1..=40u32 {
        let r = make_zmod(n).unwrap();
        for x in 0..n {
            let inv = (0..n).find(|y| x * y % n == 1 % n);
            assert_eq!(r.is_unit(el(x)), inv.map(el), "{x} mod {n}");
        }
    }
}

#[test]
fn ur_z4_by_scan() {
    let naive: Vec<u32> = (0..4u32).filter(|&a| [1u32, 3].iter().any(|u| a * u * a % 4 == a)).collect();
    assert_eq!(naive, vec![0, 1, 3]);
    let r = make_zmod(4).unwrap();
    assert_eq!(ur_set(&r).elements, naive.into_iter().map(el).collect::<Vec<_>>());
}

#[test]
fn strictly_upper_e12_not_regular_by_scan() {
    // upper triangular [a, b, d] over Z/2; e12 t e12 is always zero
    let n = 2;
    let mul = |x: [u32; 3], y: [u32; 3]| [x[0] * y[0] % n, (x[0] * y[1] + x[1] * y[2]) % n, x[2] * y[2] % n];
    let e12 = [0, 1, 0];
    let regular = (0..8u32).any(|c| {
        let t = [c / 4, c / 2 % 2, c % 2];
        mul(mul(e12, t), e12) == e12
    });
    assert!(!regular);
    let r = ring("T2(Z2)");
    assert_eq!(regular_witness(&r, el(2)), None);
    assert_eq!(classify(&r, el(2)).kind, RegularityKind::NotRegular);
}

#[test]
fn fast_unit_test_agrees_with_scan_on_family() {
    for spec in urcorner::CURATED_FAMILY.iter().chain(&["Z1", "Z30", "M2(Z4)", "T3(Z2)", "M2(Z2xZ2)", "T2(M2(Z2))"]) {
        let r = ring(spec);
        for x in r.elements() {
            assert_eq!(r.is_unit(x), r.unit_inverse_by_scan(x), "{spec} {x}");
        }
    }
}

#[test]
fn structural_and_tabled_arithmetic_agree() {
    for spec in ["M2(Z3)", "T2(Z3)", "M2(Z2)xZ2", "Z2x(Z3xZ4)"] {
        let r = ring(spec);
        for x in r.elements() {
            for y in r.elements() {
                assert_eq!(r.mul(x, y), r.structural_mul(x, y), "{spec}");
                assert_eq!(r.add(x, y), r.structural_add(x, y), "{spec}");
            }
        }
    }
}
