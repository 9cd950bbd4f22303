use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use openbook::classify::classify_book;
use openbook::front::StabSign;
use openbook::gen::{random_front, random_legal_script, random_trivial_book};
use openbook::moves::{apply_move, DiagMove};
use openbook::page::{Circle, PageDiagram};
use openbook::twist::{
    double_branched_cover, monodromy_action, open_book_homology, relative_correction, twist_matrix, OpenBook,
    Spin, Twist,
};
use openbook::words::{
    apply_pres_move, Letter, PresMove, Presentation, Side, Word,
};
use openbook::zalg::{cokernel, gl_orbit_invariant, smith_normal_form, IntMatrix};

fn small_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn square_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))
}

/// Product of elementary unimodular matrices described by `(i, j, c)`.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        let mut e = IntMatrix::identity(n);
        if i == j {
            e[(i, i)] = BigInt::from(-1);
        } else {
            e[(i, j)] = BigInt::from(c);
        }
        u = &e * &u;
    }
    u
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..8, 0usize..8, -3i64..=3), 0..12)
}

/// Unlinked-or-linked rot 0 unknots, so every circle supports a twist.
fn sphere_page(lk: &[Vec<i64>]) -> PageDiagram {
    let m = lk.len();
    let circles = (0..m).map(|i| Circle::unknot(format!("K{}", i + 1), 0)).collect();
    let mut sym = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            sym[i][j] = lk[i][j];
            sym[j][i] = lk[i][j];
        }
    }
    PageDiagram::from_unknots(circles, &sym).unwrap()
}

fn book_strategy() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<(usize, bool)>)> {
    (1usize..=4).prop_flat_map(|m| {
        (
            prop::collection::vec(prop::collection::vec(-3i64..=3, m), m),
            prop::collection::vec((0..m, any::<bool>()), 0..8),
        )
    })
}

fn twists(word: &[(usize, bool)]) -> Vec<Twist> {
    word.iter()
        .map(|&(c, right)| if right { Twist::right(c) } else { Twist::left(c) })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_is_a_valid_decomposition(rows in small_matrix(5)) {
        let a = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert_eq!(s.u.determinant().abs(), BigInt::from(1));
        prop_assert_eq!(s.v.determinant().abs(), BigInt::from(1));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|d| !d.is_negative()));
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero(), "{} does not divide {}", w[0], w[1]);
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn cokernel_order_is_abs_det(rows in square_matrix(5)) {
        let a = IntMatrix::from_rows(&rows);
        let det = a.determinant();
        let g = cokernel(&a);
        if det.is_zero() {
            prop_assert!(g.free_rank() > 0);
        } else {
            prop_assert_eq!(g.order(), Some(det.abs()));
        }
    }

    #[test]
    fn cokernel_is_invariant_under_unimodular_change(rows in small_matrix(4), l in ops(), r in ops()) {
        let a = IntMatrix::from_rows(&rows);
        let u = unimodular(a.rows(), &l);
        let v = unimodular(a.cols(), &r);
        prop_assert_eq!(cokernel(&(&(&u * &a) * &v)), cokernel(&a));
    }

    #[test]
    fn congruent_forms_have_isomorphic_cokernels(rows in square_matrix(4), l in ops()) {
        let n = rows.len();
        let mut q = IntMatrix::from_rows(&rows);
        for i in 0..n {
            for j in 0..i {
                q[(i, j)] = q[(j, i)].clone();
            }
        }
        let p = unimodular(n, &l);
        prop_assert_eq!(cokernel(&(&(&p.transpose() * &q) * &p)), cokernel(&q));
    }

    #[test]
    fn orbit_invariant_is_constant_on_orbits(v in prop::collection::vec(-20i64..=20, 1..5), l in ops()) {
        let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
        let u = unimodular(v.len(), &l);
        prop_assert_eq!(gl_orbit_invariant(&u.mul_vec(&v)), gl_orbit_invariant(&v));
    }

    #[test]
    fn twist_matrices_preserve_the_form((lk, _) in book_strategy(), i in 0usize..4) {
        let q = sphere_page(&lk).framing_matrix().unwrap();
        let i = i % q.rows();
        let t = twist_matrix(&q, i, 1).unwrap();
        prop_assert_eq!(&(&t.transpose() * &q) * &t, q.clone());
        prop_assert_eq!(&t * &t, IntMatrix::identity(q.rows()));
    }

    #[test]
    fn word_times_inverse_acts_trivially((lk, word) in book_strategy()) {
        let page = sphere_page(&lk);
        let mut w = twists(&word);
        let inv: Vec<Twist> = w.iter().rev().map(|t| Twist { circle: t.circle, exp: -t.exp }).collect();
        w.extend(inv);
        let b = OpenBook::new(page, w).unwrap();
        prop_assert_eq!(monodromy_action(&b).unwrap(), IntMatrix::identity(b.page().circle_count()));
        prop_assert!(relative_correction(&b).unwrap().is_zero());
    }

    #[test]
    fn relative_correction_is_a_cocycle((lk, word) in book_strategy(), cut in 0usize..8) {
        let page = sphere_page(&lk);
        let w = twists(&word);
        let cut = cut.min(w.len());
        let book = |ts: &[Twist]| OpenBook::new(page.clone(), ts.to_vec()).unwrap();
        let (first, second) = (book(&w[..cut]), book(&w[cut..]));
        let whole = relative_correction(&book(&w)).unwrap();
        let psi2 = monodromy_action(&second).unwrap();
        let expected = &psi2 * &relative_correction(&first).unwrap();
        let c2 = relative_correction(&second).unwrap();
        let mut sum = expected.clone();
        for i in 0..sum.rows() {
            for j in 0..sum.cols() {
                sum[(i, j)] += &c2[(i, j)];
            }
        }
        prop_assert_eq!(whole, sum);
    }

    #[test]
    fn monodromy_action_is_ordered_product((lk, word) in book_strategy()) {
        let page = sphere_page(&lk);
        let q = page.framing_matrix().unwrap();
        let w = twists(&word);
        let mut expected = IntMatrix::identity(q.rows());
        for t in &w {
            expected = &twist_matrix(&q, t.circle, t.exp).unwrap() * &expected;
        }
        let b = OpenBook::new(page, w).unwrap();
        prop_assert_eq!(monodromy_action(&b).unwrap(), expected);
    }

    #[test]
    fn double_cover_twice_quadruples_the_word((lk, word) in book_strategy()) {
        let b = OpenBook::new(sphere_page(&lk), twists(&word)).unwrap();
        let four = double_branched_cover(&double_branched_cover(&b));
        let expected: Vec<Twist> = (0..4).flat_map(|_| b.monodromy().to_vec()).collect();
        prop_assert_eq!(four.monodromy(), expected.as_slice());
        prop_assert_eq!(four.page(), b.page());
    }

    #[test]
    fn homology_has_the_right_shape((lk, word) in book_strategy()) {
        let b = OpenBook::new(sphere_page(&lk), twists(&word)).unwrap();
        let h = open_book_homology(&b).unwrap();
        prop_assert_eq!(h.h0.free_rank(), 1);
        prop_assert!(h.h1.is_trivial());
        prop_assert!(h.h4.is_trivial());
        prop_assert_eq!(h.h5.free_rank(), 1);
        prop_assert!(h.h3.torsion().is_empty());
        prop_assert_eq!(h.h3.free_rank(), h.h2.free_rank());
        // all circles have rot 0
        prop_assert_eq!(h.spin, Spin::Yes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn legal_scripts_preserve_the_classification(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_trivial_book(&mut rng, 4);
        let script = random_legal_script(&mut rng, &b, 10);
        let mut cur = b.clone();
        for m in &script {
            cur = apply_move(&cur, m).unwrap();
        }
        prop_assert_eq!(classify_book(&cur).unwrap(), classify_book(&b).unwrap());
        let (h0, h1) = (open_book_homology(&b).unwrap(), open_book_homology(&cur).unwrap());
        prop_assert!(h0.same_invariants(&h1));
    }

    #[test]
    fn move_one_is_undone_by_its_inverse(seed in any::<u64>(), pick in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_trivial_book(&mut rng, 4);
        prop_assume!(b.page().circle_count() > 0);
        let name = b.page().circles()[pick % b.page().circle_count()].name.clone();
        let up = apply_move(&b, &DiagMove::MoveI { circle: name.clone() }).unwrap();
        let c = &up.page().circles()[pick % b.page().circle_count()];
        prop_assert_eq!(c.tb, b.page().circles()[pick % b.page().circle_count()].tb - 2);
        let back = apply_move(&up, &DiagMove::MoveIInv { circle: name.clone() }).unwrap();
        prop_assert_eq!(&back, &b);
        let flipped = apply_move(&apply_move(&b, &DiagMove::Flip { circle: name.clone() }).unwrap(), &DiagMove::Flip { circle: name }).unwrap();
        prop_assert_eq!(flipped, b);
    }

    #[test]
    fn cancelling_pair_add_then_remove_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_trivial_book(&mut rng, 3);
        let added = apply_move(&b, &DiagMove::T2Add { handle: "g".into(), word: Word::empty(), name: Some("C".into()) }).unwrap();
        prop_assert!(added.page().has_one_handles());
        prop_assert_eq!(added.page().circle_count(), b.page().circle_count() + 1);
        let removed = apply_move(&added, &DiagMove::T2Remove { handle: "g".into(), circle: "C".into() }).unwrap();
        prop_assert_eq!(removed, b);
    }

    #[test]
    fn trivial_books_are_spin_iff_rotations_are_even(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_trivial_book(&mut rng, 4);
        let even = b.page().circles().iter().all(|c| c.rot % 2 == 0);
        let h = open_book_homology(&b).unwrap();
        prop_assert_eq!(h.spin, if even { Spin::Yes } else { Spin::No });
        prop_assert_eq!(h.h2.free_rank(), b.page().circle_count());
    }

    #[test]
    fn front_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_front(&mut rng, 14, false);
        for c in 0..f.component_count() {
            let inv = f.classical_invariants(c).unwrap();
            prop_assert_eq!((inv.tb + inv.rot).rem_euclid(2), 1, "tb {} rot {}", inv.tb, inv.rot);
            let plus = f.stabilize(c, StabSign::Plus).unwrap().classical_invariants(c).unwrap();
            prop_assert_eq!((plus.tb, plus.rot), (inv.tb - 1, inv.rot + 1));
            let minus = f.stabilize(c, StabSign::Minus).unwrap().classical_invariants(c).unwrap();
            prop_assert_eq!((minus.tb, minus.rot), (inv.tb - 1, inv.rot - 1));
            let rev = f.reverse_component(c).unwrap().classical_invariants(c).unwrap();
            prop_assert_eq!((rev.tb, rev.rot), (inv.tb, -inv.rot));
            for d in 0..f.component_count() {
                if c != d {
                    prop_assert_eq!(f.linking(c, d).unwrap(), f.linking(d, c).unwrap());
                }
            }
        }
    }
}

fn presentation(rels: &[Vec<(usize, bool)>], n: usize) -> Presentation {
    let gens: Vec<String> = ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect();
    let words = rels
        .iter()
        .map(|r| {
            Word::from_letters(r.iter().map(|&(g, pos)| Letter::new(gens[g % n].clone(), if pos { 1 } else { -1 })).collect())
                .free_reduce()
        })
        .collect();
    Presentation::new(gens, words).unwrap()
}

fn balanced() -> impl Strategy<Value = (usize, Vec<Vec<(usize, bool)>>)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec((0..n, any::<bool>()), 0..6), n)))
}

fn ac_move() -> impl Strategy<Value = (u8, usize, usize, bool, bool)> {
    (0u8..3, 0usize..3, 0usize..3, any::<bool>(), any::<bool>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ac_moves_preserve_the_abelianization((n, rels) in balanced(), moves in prop::collection::vec(ac_move(), 0..8)) {
        let p = presentation(&rels, n);
        let mut cur = p.clone();
        for (kind, i, j, flag, inv) in moves {
            let (i, j) = (i % n, j % n);
            let side = if flag { Side::Left } else { Side::Right };
            let m = match kind {
                0 => PresMove::AC1 { index: i },
                1 => PresMove::AC2 { index: i, generator: p.generators()[j].clone(), side },
                _ => PresMove::AC3 { target: i, source: j, side, inverse: inv },
            };
            if let Ok(next) = apply_pres_move(&cur, &m) {
                cur = next;
            }
        }
        prop_assert!(cur.is_balanced());
        prop_assert_eq!(cur.abelianization(), p.abelianization());
    }

    #[test]
    fn tietze_add_then_remove_is_identity((n, rels) in balanced(), w in prop::collection::vec((0usize..3, any::<bool>()), 0..5)) {
        let p = presentation(&rels, n);
        let word = Word::from_letters(
            w.iter().map(|&(g, pos)| Letter::new(p.generators()[g % n].clone(), if pos { 1 } else { -1 })).collect(),
        ).free_reduce();
        let added = apply_pres_move(&p, &PresMove::T2add { generator: "z".into(), word }).unwrap();
        let idx = added.relations().len() - 1;
        let back = apply_pres_move(&added, &PresMove::T2remove { generator: "z".into(), relation: idx }).unwrap();
        prop_assert_eq!(back, p);
    }
}
