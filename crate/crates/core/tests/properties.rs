use proptest::prelude::*;

use polyglue::ffield::{Fe, Field};
use polyglue::invariants::{det_level_generators, glue, GeneratorSet, GluingSpec, Provenance};
use polyglue::matgroup::{group_closure, Matrix, DEFAULT_CAP};
use polyglue::poly::{subspace_poly, Monomial, MultiPoly};
use polyglue::sparsity::{parse_pattern, SparsityPattern};
use polyglue::verify::{hilbert_from_degrees, is_invariant};

fn fields() -> Vec<Field> {
    vec![
        Field::prime(2).unwrap(),
        Field::prime(5).unwrap(),
        Field::new(2, 2, &[1, 1, 1]).unwrap(),
        Field::new(2, 3, &[1, 1, 0, 1]).unwrap(),
        Field::new(3, 2, &[1, 0, 1]).unwrap(),
    ]
}

fn elem(field: &Field, k: u32) -> Fe {
    field.element(k % field.size()).unwrap()
}

/// A homogeneous polynomial of degree `d` in `nvars` variables from raw seeds.
fn form(field: &Field, nvars: usize, d: u64, seeds: &[u32]) -> MultiPoly {
    let mut f = MultiPoly::zero(field, nvars);
    for (m, &s) in Monomial::all_of_degree(nvars, d).into_iter().zip(seeds.iter().cycle()) {
        f = f.add(&MultiPoly::term(field, m, elem(field, s))).unwrap();
    }
    f
}

fn invertible(field: &Field, n: usize, seeds: &[u32]) -> Option<Matrix> {
    let rows = (0..n).map(|i| (0..n).map(|j| elem(field, seeds[i * n + j])).collect()).collect();
    let m = Matrix::from_rows(field, rows).unwrap();
    (!m.det().is_zero()).then_some(m)
}

proptest! {
    #[test]
    fn field_axioms(fi in 0usize..5, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[fi];
        let (a, b, c) = (elem(f, a), elem(f, b), elem(f, c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            prop_assert_eq!(f.pow(a, u64::from(f.size()) - 1), Fe::ONE);
        }
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn action_is_a_homomorphism(
        fi in 0usize..5,
        gs in prop::collection::vec(any::<u32>(), 4),
        hs in prop::collection::vec(any::<u32>(), 4),
        fs in prop::collection::vec(any::<u32>(), 1..6),
        d in 1u64..4,
    ) {
        let field = &fields()[fi];
        let (Some(g), Some(h)) = (invertible(field, 2, &gs), invertible(field, 2, &hs)) else {
            return Ok(());
        };
        let f = form(field, 2, d, &fs);
        let gh = g.mul(&h).unwrap();
        prop_assert_eq!(f.act(&gh).unwrap(), f.act(&h).unwrap().act(&g).unwrap());
        let f2 = f.mul(&f).unwrap();
        prop_assert_eq!(f2.act(&g).unwrap(), f.act(&g).unwrap().mul(&f.act(&g).unwrap()).unwrap());
    }

    #[test]
    fn polynomial_text_round_trips(
        fi in 0usize..5,
        seeds in prop::collection::vec(any::<u32>(), 1..8),
        d in 0u64..5,
    ) {
        let field = &fields()[fi];
        let f = form(field, 3, d, &seeds);
        prop_assert_eq!(MultiPoly::parse(field, 3, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn pow_matches_repeated_multiplication(
        fi in 0usize..5,
        seeds in prop::collection::vec(any::<u32>(), 1..4),
        e in 0u64..12,
    ) {
        let field = &fields()[fi];
        let f = form(field, 2, 1, &seeds);
        let mut expected = MultiPoly::one(field, 2);
        for _ in 0..e {
            expected = expected.mul(&f).unwrap();
        }
        prop_assert_eq!(f.pow(e).unwrap(), expected);
    }

    #[test]
    fn subspace_poly_is_additive_and_kills_the_subspace(
        fi in 0usize..5,
        seeds in prop::collection::vec(any::<u32>(), 6),
        k in 1usize..3,
    ) {
        let field = &fields()[fi];
        let q = u64::from(field.characteristic());
        let basis: Vec<MultiPoly> = (0..k)
            .map(|i| MultiPoly::linear_form(field, &[elem(field, seeds[3 * i]), elem(field, seeds[3 * i + 1]), Fe::ZERO]))
            .collect();
        let Ok(p) = subspace_poly(field, 3, &basis, q) else {
            return Ok(());
        };
        for b in &basis {
            prop_assert!(p.eval(b).unwrap().is_zero());
        }
        let x = MultiPoly::var(field, 3, 2);
        let y = MultiPoly::var(field, 3, 0);
        let sum = p.eval(&x.add(&y).unwrap()).unwrap();
        prop_assert_eq!(sum, p.eval(&x).unwrap().add(&p.eval(&y).unwrap()).unwrap());
        prop_assert_eq!(p.eval(&x).unwrap().total_degree(), Some(q.pow(k as u32)));
    }

    #[test]
    fn hilbert_series_counts_monomials_in_generators(
        degrees in prop::collection::vec(1u64..5, 1..4),
        depth in 0u64..15,
    ) {
        let series = hilbert_from_degrees(&degrees, depth);
        for d in 0..=depth {
            let mut brute = 0u128;
            let mut stack = vec![(0usize, d)];
            while let Some((i, rem)) = stack.pop() {
                if i == degrees.len() {
                    brute += u128::from(rem == 0);
                    continue;
                }
                let mut used = 0;
                while used <= rem {
                    stack.push((i + 1, rem - used));
                    used += degrees[i];
                }
            }
            prop_assert_eq!(series[d as usize], brute);
        }
    }

    #[test]
    fn pattern_text_round_trips(
        fi in 0usize..5,
        n in 1usize..4,
        cells in prop::collection::vec((any::<bool>(), any::<u32>(), any::<u32>()), 9),
    ) {
        let field = &fields()[fi];
        let mut pat = SparsityPattern::new(field, n);
        for i in 0..n {
            for j in 0..n {
                let (on, a, b) = cells[i * 3 + j];
                if on {
                    let mut set = vec![elem(field, a), elem(field, b)];
                    if i == j {
                        set.retain(|x| !x.is_zero());
                        if set.is_empty() {
                            continue;
                        }
                    }
                    pat.set(i, j, polyglue::ffield::ScalarSet::new(set).unwrap());
                }
            }
        }
        prop_assert_eq!(parse_pattern(&pat.to_string()).unwrap(), pat);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn glued_generators_are_invariant_under_the_unipotent_part(k in 1usize..3, yk in 1usize..3) {
        let field = Field::new(2, 2, &[1, 1, 1]).unwrap();
        let n = k + yk;
        let x_vars: Vec<usize> = (0..k).collect();
        let y_vars: Vec<usize> = (k..n).collect();
        let basis: Vec<MultiPoly> = x_vars.iter().map(|&i| MultiPoly::var(&field, n, i)).collect();
        let spec = GluingSpec::new(&field, n, &x_vars, &y_vars, 4, basis).unwrap();
        let size = spec.subspace_size().unwrap();
        let z = field.z().unwrap();
        let mut phi = Vec::new();
        for &i in &x_vars {
            for &j in &y_vars {
                for a in [Fe::ONE, z] {
                    phi.push(Matrix::transvection(&field, n, i, j, a).unwrap());
                }
            }
        }
        let group = group_closure(&field, n, &phi, DEFAULT_CAP).unwrap();
        for f in &spec.f {
            prop_assert!(is_invariant(f, &group).unwrap());
            prop_assert_eq!(f.homogeneous_degree(), Some(size));
        }
        let inv_x = GeneratorSet::new(&field, n, basis_pairs(&field, n, &x_vars));
        let inv_y = GeneratorSet::new(&field, n, basis_pairs(&field, n, &y_vars));
        let glued = glue(&inv_x, &inv_y, &spec).unwrap();
        let expected = inv_x.degree_product().unwrap() * inv_y.degree_product().unwrap() * u128::from(size).pow(yk as u32);
        prop_assert_eq!(glued.degree_product(), Some(expected));
    }
}

fn basis_pairs(field: &Field, n: usize, vars: &[usize]) -> Vec<(MultiPoly, Provenance)> {
    vars.iter().map(|&v| (MultiPoly::var(field, n, v), Provenance::Variable)).collect()
}

#[test]
fn det_level_generators_are_invariant() {
    for (field, q, m) in [
        (Field::prime(3).unwrap(), 3u64, 1u64),
        (Field::prime(3).unwrap(), 3, 2),
        (Field::prime(5).unwrap(), 5, 2),
        (Field::new(2, 2, &[1, 1, 1]).unwrap(), 4, 3),
    ] {
        let set = det_level_generators(&field, 2, q, m, &[0, 1]).unwrap();
        let kappa = field.element_of_order(m).unwrap();
        let mut gens = vec![Matrix::diagonal(&field, 2, 0, kappa).unwrap()];
        for a in field.elements().filter(|a| !a.is_zero()) {
            gens.push(Matrix::transvection(&field, 2, 0, 1, a).unwrap());
            gens.push(Matrix::transvection(&field, 2, 1, 0, a).unwrap());
        }
        let group = group_closure(&field, 2, &gens, DEFAULT_CAP).unwrap();
        let sl = (q * q - 1) * (q * q - q) / (q - 1);
        assert_eq!(group.order() as u64, sl * m);
        for f in set.polynomials() {
            assert!(is_invariant(&f, &group).unwrap());
        }
        assert_eq!(set.degree_product(), Some(u128::from(sl * m)));
    }
}
