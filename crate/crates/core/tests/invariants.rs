use proptest::prelude::*;

use relcalc_core::chains::{has_singular_chain, shifted};
use relcalc_core::harness::generate::{inclusion_rank_one, random_rank_one, singular_pencil, trial_rng};
use relcalc_core::harness::io::{PencilFile, RankOneFile, RelationFile};
use relcalc_core::harness::{gen_pencil, CampaignConfig, Scenario};
use relcalc_core::perturb::{decompose_path, perturbation_order, s_n, s_n_oracle};
use relcalc_core::{FieldTag, LinearRelation, Matrix, Poly, Subspace};

const FIELDS: [FieldTag; 3] = [FieldTag::Q, FieldTag::Gf(2), FieldTag::Gf(3)];

fn field() -> impl Strategy<Value = FieldTag> {
    prop::sample::select(FIELDS.to_vec())
}

fn rows(count: std::ops::RangeInclusive<usize>, len: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, len), count)
}

fn span(f: FieldTag, ambient: usize, rows: &[Vec<i64>]) -> Subspace {
    let v: Vec<_> = rows.iter().map(|r| Matrix::vec_i64(f, r)).collect();
    Subspace::span(f, ambient, &v).unwrap()
}

fn relation(f: FieldTag, d: usize, rows: &[Vec<i64>]) -> LinearRelation {
    LinearRelation::new(span(f, 2 * d, rows)).unwrap()
}

/// A field, `d`, and generators for up to three relations in `F^d`.
fn relations(k: usize) -> impl Strategy<Value = (FieldTag, usize, Vec<Vec<Vec<i64>>>)> {
    (field(), 1usize..=3).prop_flat_map(move |(f, d)| {
        (Just(f), Just(d), prop::collection::vec(rows(0..=2 * d, 2 * d), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(f in field(), m in rows(1..=4, 5)) {
        let m = Matrix::from_rows(f, 5, m.iter().map(|r| Matrix::vec_i64(f, r)).collect()).unwrap();
        prop_assert_eq!(m.rank() + m.kernel().dim(), 5);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn modular_law_and_annihilators(f in field(), u in rows(0..=3, 4), v in rows(0..=3, 4), w in rows(0..=3, 4)) {
        let (u, v, w) = (span(f, 4, &u), span(f, 4, &v), span(f, 4, &w));
        let w = w.sum(&u).unwrap();
        // U ⊆ W implies W ∩ (U + V) = U + (W ∩ V)
        let left = w.intersect(&u.sum(&v).unwrap()).unwrap();
        let right = u.sum(&w.intersect(&v).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(u.dim() + u.annihilator().rows(), 4);
        prop_assert_eq!(u.annihilator().kernel(), u.clone());
        let both = u.sum(&v).unwrap().dim() + u.intersect(&v).unwrap().dim();
        prop_assert_eq!(both, u.dim() + v.dim());
    }

    #[test]
    fn inverse_and_composition_laws((f, d, g) in relations(3)) {
        let (a, b, c) = (relation(f, d, &g[0]), relation(f, d, &g[1]), relation(f, d, &g[2]));
        prop_assert_eq!(a.inverse().inverse(), a.clone());
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.inverse(), b.inverse().compose(&a.inverse()).unwrap());
        prop_assert_eq!(ab.compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
        let id = LinearRelation::identity(f, d);
        prop_assert_eq!(a.compose(&id).unwrap(), a.clone());
        prop_assert_eq!(id.compose(&a).unwrap(), a.clone());
        prop_assert_eq!(a.inverse().ker(), a.mul());
        prop_assert_eq!(a.inverse().dom(), a.ran());
    }

    #[test]
    fn power_towers_are_monotone_and_consistent((f, d, g) in relations(1)) {
        let a = relation(f, d, &g[0]);
        let nmax = 2 * d;
        let spaces = a.power_spaces(nmax);
        let powers = a.powers(nmax);
        for (n, power) in powers.iter().enumerate() {
            prop_assert_eq!(&spaces.ker[n], &power.ker());
            prop_assert_eq!(&spaces.mul[n], &power.mul());
            prop_assert_eq!(&spaces.ran[n], &power.ran());
            if n > 0 {
                prop_assert!(spaces.ker[n - 1].is_subset_of(&spaces.ker[n]));
                prop_assert!(spaces.mul[n - 1].is_subset_of(&spaces.mul[n]));
                prop_assert!(spaces.ran[n].is_subset_of(&spaces.ran[n - 1]));
            }
        }
        let degrees = a.jordan_degrees(nmax);
        for n in 0..=nmax {
            prop_assert_eq!(degrees[..n].iter().sum::<usize>(), spaces.ker[n].dim());
        }
    }

    #[test]
    fn defect_is_at_most_n_for_one_dim_perturbations(
        (f, d, g) in relations(1),
        extra in rows(2..=2, 6),
    ) {
        let c = relation(f, d, &g[0]);
        let grow = |row: &Vec<i64>| {
            let mut gens = g[0].clone();
            gens.push(row[..2 * d].to_vec());
            relation(f, d, &gens)
        };
        let (a, b) = (grow(&extra[0]), grow(&extra[1]));
        prop_assert!(perturbation_order(&a, &b).unwrap() <= 1);
        prop_assert!(c.is_subset_of(&a) && c.is_subset_of(&b));
        for n in 0..=2 * d {
            prop_assert!(s_n(&a, &b, n).unwrap() <= n);
            prop_assert_eq!(s_n(&a, &a, n).unwrap(), 0);
            if f != FieldTag::Q {
                prop_assert_eq!(s_n(&a, &b, n).unwrap(), s_n_oracle(&a, &b, n).unwrap());
            }
        }
    }

    #[test]
    fn paths_are_made_of_unit_steps((f, d, g) in relations(2)) {
        let (a, b) = (relation(f, d, &g[0]), relation(f, d, &g[1]));
        let p = perturbation_order(&a, &b).unwrap();
        let path = decompose_path(&a, &b).unwrap();
        prop_assert_eq!(path.len(), p + 1);
        prop_assert_eq!(path.first().unwrap(), &a);
        prop_assert_eq!(path.last().unwrap(), &b);
        for w in path.windows(2) {
            prop_assert!(perturbation_order(&w[0], &w[1]).unwrap() <= 1);
        }
    }

    #[test]
    fn rational_roots_of_split_polynomials(roots in prop::collection::vec((-9i64..=9, 1i64..=9), 1..=4)) {
        let q = FieldTag::Q;
        let p = roots.iter().fold(Poly::constant(q.from_i64(3)), |acc, &(n, d)| {
            acc.mul(&Poly::linear(-q.from_ratio(n, d), q.one()))
        });
        let mut expect: Vec<_> = roots.iter().map(|&(n, d)| q.from_ratio(n, d)).collect();
        expect.sort_by(|x, y| x.re().cmp(&y.re()));
        expect.dedup();
        prop_assert_eq!(p.roots(), expect.clone());
        // an irreducible quadratic factor adds nothing
        let q2 = p.mul(&Poly::new(q, vec![q.from_i64(-2), q.zero(), q.one()]));
        prop_assert_eq!(q2.roots(), expect);
    }

    #[test]
    fn pencil_facts(seed in any::<u64>(), f in field()) {
        let cfg = CampaignConfig::new(Scenario::PencilRankOne, f, 1, 1, seed).with_dims(1, 3);
        let (p, q, _) = gen_pencil(&cfg, 0);
        let after = p.apply_perturbation(&q).unwrap();
        let profile = p.profile().unwrap();
        if profile.regular {
            prop_assert!(!has_singular_chain(&p.to_relation()));
        }
        prop_assert!(profile.rank <= p.d());
        prop_assert!(perturbation_order(&p.to_relation(), &after.to_relation()).unwrap() <= 1);
        prop_assert!(perturbation_order(&p.dual().to_relation(), &after.dual().to_relation()).unwrap() <= 1);
        prop_assert_eq!(p.dual().dual(), p.clone());
        let graphs = LinearRelation::from_graph(p.e()).unwrap().inverse().compose(&LinearRelation::from_graph(p.f()).unwrap()).unwrap();
        prop_assert_eq!(p.to_relation(), graphs);
        for at in p.eigen_candidates().unwrap() {
            let kernels = shifted(&p.to_relation(), &at).power_spaces(p.d()).ker;
            let chains = p.chain_spaces(&at, p.d());
            prop_assert_eq!(chains, kernels, "at {}", at);
        }
    }

    #[test]
    fn inclusion_perturbations_keep_singular_pencils_singular(seed in any::<u64>(), collapse in any::<bool>()) {
        let mut rng = trial_rng(seed, 0);
        let p = singular_pencil(FieldTag::Q, 3, &mut rng);
        if let Some(q) = inclusion_rank_one(&p, collapse, &mut rng) {
            let after = p.apply_perturbation(&q).unwrap();
            prop_assert!(p.satisfies_inclusion(&q));
            prop_assert!(p.to_relation().is_subset_of(&after.to_relation()));
            prop_assert!(!after.profile().unwrap().regular);
        }
        let q = random_rank_one(FieldTag::Q, 3, &mut rng);
        prop_assert_eq!(q.w().len(), 3);
    }

    #[test]
    fn json_round_trips((f, d, g) in relations(1), seed in any::<u64>()) {
        let a = relation(f, d, &g[0]);
        let text = serde_json::to_string(&RelationFile::from_relation(&a)).unwrap();
        prop_assert_eq!(RelationFile::parse(&text).unwrap(), a);
        let cfg = CampaignConfig::new(Scenario::PencilRankOne, FieldTag::Qi, 2, 1, seed);
        let (p, q, _) = gen_pencil(&cfg, 0);
        let text = serde_json::to_string(&PencilFile::from_pencil(&p)).unwrap();
        prop_assert_eq!(PencilFile::parse(&text).unwrap(), p);
        let text = serde_json::to_string(&RankOneFile::from_rank_one(FieldTag::Qi, &q)).unwrap();
        prop_assert_eq!(RankOneFile::parse(&text).unwrap(), q);
    }
}
