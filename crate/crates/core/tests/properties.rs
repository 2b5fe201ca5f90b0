use proptest::prelude::*;
use sidon_core::field::{FieldSpec, MAX_DEGREE};
use sidon_core::graphdist::{exclude_dist_bruteforce, exclude_dist_walsh, first_disagreement};
use sidon_core::sidon::{
    apply_affine, choose3, exclude_distribution, is_sidon, random_affine, random_sidon,
    random_sidon_capped, PointSet,
};
use sidon_core::vbf::{fwht, graph_of, is_apn, walsh_full, TruthTable};
use sidon_core::viz::{layout_index, GridLayout};

fn field(n: u32) -> FieldSpec {
    FieldSpec::new(n).unwrap()
}

#[test]
fn field_axioms_exhaustive_small() {
    for n in 1..=4 {
        let f = field(n);
        let size = 1u32 << n;
        for a in 0..size {
            assert_eq!(f.mul(a, 1), a);
            for b in 0..size {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..size {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                }
            }
        }
    }
}

/// Schoolbook multiply-then-reduce, independent of the library's routine.
fn slow_mul(a: u32, b: u32, modulus: u32, n: u32) -> u32 {
    let mut prod: u64 = 0;
    for i in 0..n {
        if (b >> i) & 1 == 1 {
            prod ^= (a as u64) << i;
        }
    }
    for bit in (n..2 * n).rev() {
        if (prod >> bit) & 1 == 1 {
            prod ^= (modulus as u64) << (bit - n);
        }
    }
    prod as u32
}

proptest! {
    #[test]
    fn field_axioms_random(n in 1u32..=MAX_DEGREE, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(n);
        let mask = (1u32 << n) - 1;
        let (a, b, c) = (a & mask, b & mask, c & mask);
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
        prop_assert_eq!(f.mul(a, b), slow_mul(a, b, f.modulus(), n));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn pow_is_additive(n in 1u32..=MAX_DEGREE, a in any::<u32>(), i in 0u64..1000, j in 0u64..1000) {
        let f = field(n);
        let a = a & ((1u32 << n) - 1);
        prop_assert_eq!(f.pow(a, i + j), f.mul(f.pow(a, i), f.pow(a, j)));
        if a != 0 {
            prop_assert_eq!(f.pow(a, f.group_order()), 1);
        }
    }

    #[test]
    fn walsh_matches_definition(n in 1u32..=5, seed in any::<u64>()) {
        let size = 1u32 << n;
        let values: Vec<u32> = (0..size as u64)
            .map(|x| ((x.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ seed).rotate_left(17) % size as u64) as u32)
            .collect();
        let f = TruthTable::new(n, values.clone()).unwrap();
        let w = walsh_full(&f);
        for u in 0..size {
            for v in 0..size {
                let direct: i64 = (0..size)
                    .map(|x| if ((v & values[x as usize]) ^ (u & x)).count_ones().is_multiple_of(2) { 1 } else { -1 })
                    .sum();
                prop_assert_eq!(w.get(u, v), direct);
            }
        }
    }

    #[test]
    fn fwht_is_involutive_up_to_scale(data in prop::collection::vec(-1000i64..1000, 64)) {
        let mut t = data.clone();
        fwht(&mut t);
        fwht(&mut t);
        let back: Vec<i64> = t.iter().map(|x| x / 64).collect();
        prop_assert_eq!(back, data);
    }

    #[test]
    fn apn_iff_graph_sidon(n in 2u32..=4, values in prop::collection::vec(any::<u32>(), 16)) {
        let size = 1usize << n;
        let values: Vec<u32> = values[..size].iter().map(|v| v % size as u32).collect();
        let f = TruthTable::new(n, values).unwrap();
        prop_assert_eq!(is_apn(&f), is_sidon(&graph_of(&f)));
    }

    #[test]
    fn power_maps_apn_iff_sidon(n in 3u32..=7, d in 1u64..128) {
        let f = TruthTable::from_power(&field(n), d);
        prop_assert_eq!(is_apn(&f), is_sidon(&graph_of(&f)));
    }

    #[test]
    fn sidon_check_matches_quadruple_oracle(m in 2u32..=5, seed in any::<u64>(), cap in 2usize..12) {
        let size = 1u32 << m;
        let mut rng = seed;
        let mut pts = std::collections::BTreeSet::new();
        while pts.len() < cap.min(size as usize) {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            pts.insert(((rng >> 33) % size as u64) as u32);
        }
        let s = PointSet::new(m, pts.into_iter().collect()).unwrap();
        let p = s.points();
        let mut collision = false;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                for k in 0..p.len() {
                    for l in k + 1..p.len() {
                        if (i, j) != (k, l) && p[i] ^ p[j] == p[k] ^ p[l] {
                            collision = true;
                        }
                    }
                }
            }
        }
        prop_assert_eq!(is_sidon(&s), !collision);
    }

    #[test]
    fn conservation_and_chain(m in 3u32..=10, seed in any::<u64>()) {
        let s = random_sidon(m, seed).unwrap();
        let d = exclude_distribution(&s).unwrap();
        let mass: u128 = d.histogram().iter().map(|(&k, &c)| k as u128 * c as u128).sum();
        prop_assert_eq!(mass, choose3(s.len() as u64));
        prop_assert!(d.inequality_chain_holds());
        // greedy construction stops only at maximal sets
        prop_assert!(d.is_maximal());
    }

    #[test]
    fn affine_maps_transport_multiplicities(m in 3u32..=9, seed in any::<u64>(), cap in 3usize..20) {
        let s = random_sidon_capped(m, cap, seed).unwrap();
        let a = random_affine(m, seed ^ 0xabcdef);
        let t = apply_affine(&s, &a).unwrap();
        let ds = exclude_distribution(&s).unwrap();
        let dt = exclude_distribution(&t).unwrap();
        prop_assert_eq!(ds.histogram(), dt.histogram());
        for x in 0..1u32 << m {
            prop_assert_eq!(ds.get(x), dt.get(a.apply(x)));
        }
    }

    #[test]
    fn walsh_route_matches_bruteforce_on_apn_powers(n in 3u32..=7, d in 1u64..128) {
        let f = TruthTable::from_power(&field(n), d);
        prop_assume!(is_apn(&f));
        let a = exclude_dist_walsh(&f).unwrap();
        let b = exclude_dist_bruteforce(&f).unwrap();
        prop_assert_eq!(first_disagreement(&a, &b), None);
    }
}

#[test]
fn layout_is_bijective() {
    for n in 0..=14 {
        let layout = GridLayout::new(n);
        assert_eq!(layout.rows * layout.cols, 1 << n);
        let mut seen = vec![false; 1 << n];
        for v in 0..1u32 << n {
            let (r, c) = layout_index(n, v);
            assert!(r < layout.rows && c < layout.cols);
            let idx = r * layout.cols + c;
            assert!(!seen[idx], "n={n} collision at ({r},{c})");
            seen[idx] = true;
        }
    }
}
