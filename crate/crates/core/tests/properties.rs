use std::sync::Arc;

use hexslide_core::theorems::solvability::{corner_owner, reading_order};
use hexslide_core::{
    augmented_parity, permutation_parity, AugmentedConfiguration, BoardSpec, Configuration, Parity,
    TilePermutation,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn boards() -> Vec<Arc<BoardSpec>> {
    vec![
        Arc::new(BoardSpec::triangle(3).unwrap()),
        Arc::new(BoardSpec::triangle(4).unwrap()),
        Arc::new(BoardSpec::flower(2).unwrap()),
        Arc::new(BoardSpec::parallelogram(3, 3).unwrap()),
        Arc::new(BoardSpec::parallelogram(2, 4).unwrap()),
        Arc::new(BoardSpec::trimmed_parallelogram(3, 4).unwrap()),
        Arc::new(BoardSpec::trimmed_triangle(5).unwrap()),
    ]
}

/// A uniformly shuffled configuration that admits at least one move.
fn random_config(board: &Arc<BoardSpec>, h: usize, rng: &mut ChaCha8Rng) -> Configuration {
    let mut labels: Vec<u8> = vec![0; h]
        .into_iter()
        .chain(1..=(board.len() - h) as u8)
        .collect();
    loop {
        labels.shuffle(rng);
        let c = Configuration::new(board.clone(), labels.clone()).unwrap();
        if !c.is_isolated() {
            return c;
        }
    }
}

fn sorted(mut v: Vec<u8>) -> Vec<u8> {
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slides_are_reversible_and_preserve_tiles(board_ix in 0usize..7, h in 2usize..5, seed: u64) {
        let board = boards()[board_ix].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = random_config(&board, h, &mut rng);
        let tiles = sorted(cur.tile_labels());
        for _ in 0..200 {
            let moves = cur.legal_moves();
            prop_assert!(!moves.is_empty());
            let m = moves[rng.gen_range(0..moves.len())];
            let next = cur.apply_move(&m).unwrap();
            prop_assert_eq!(next.apply_move(&m.reversed()).unwrap(), cur.clone());
            prop_assert_eq!(next.h(), h);
            prop_assert_eq!(sorted(next.tile_labels()), tiles.clone());
            cur = next;
        }
    }

    #[test]
    fn parity_is_multiplicative(seed: u64, n in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels: Vec<u8> = (1..=n as u8).collect();
        let mut a = labels.clone();
        let mut b = labels.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let pa = TilePermutation::from_mapping(labels.iter().copied().zip(a.iter().copied()).collect());
        let pb = TilePermutation::from_mapping(labels.iter().copied().zip(b.iter().copied()).collect());
        prop_assert_eq!(pa.compose(&pb).parity(), pa.parity().xor(pb.parity()));
        prop_assert_eq!(pa.inverse().parity(), pa.parity());
        let ix: Vec<usize> = a.iter().map(|&x| x as usize - 1).collect();
        prop_assert_eq!(permutation_parity(&ix), pa.parity());
    }

    #[test]
    fn augmented_parity_tracks_diagonal_slides(m1 in 2u32..6, m2 in 2u32..6, seed: u64) {
        let board = Arc::new(BoardSpec::parallelogram(m1, m2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reference = AugmentedConfiguration::from_base(random_config(&board, 2, &mut rng)).unwrap();
        let mut cur = reference.clone();
        let mut parity = Parity::Even;
        for _ in 0..300 {
            let moves = cur.base().legal_moves();
            let m = moves[rng.gen_range(0..moves.len())];
            cur = cur.apply_move(&m).unwrap();
            let p = augmented_parity(&reference, &cur).unwrap();
            prop_assert_eq!(p, if m.is_diagonal() { parity.flip() } else { parity });
            parity = p;
        }
    }

    #[test]
    fn corner_owner_survives_slides_on_triangle(seed: u64) {
        let board = Arc::new(BoardSpec::triangle(5).unwrap());
        let corners = board.tight_corners();
        prop_assert_eq!(corners.len(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = random_config(&board, 2, &mut rng);
        let owners: Vec<_> = corners.iter().map(|&c| corner_owner(&cur, c)).collect();
        prop_assert!(owners.iter().all(Option::is_some));
        for _ in 0..500 {
            let moves = cur.legal_moves();
            cur = cur.apply_move(&moves[rng.gen_range(0..moves.len())]).unwrap();
            let now: Vec<_> = corners.iter().map(|&c| corner_owner(&cur, c)).collect();
            prop_assert_eq!(&now, &owners);
        }
    }

    #[test]
    fn skinny_reading_order_survives_slides(m in 2u32..7, transpose: bool, seed: u64) {
        let board = Arc::new(if transpose { BoardSpec::parallelogram(m, 2) } else { BoardSpec::parallelogram(2, m) }.unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = random_config(&board, 2, &mut rng);
        let order = reading_order(&cur);
        prop_assert!(order.is_some());
        for _ in 0..300 {
            let moves = cur.legal_moves();
            cur = cur.apply_move(&moves[rng.gen_range(0..moves.len())]).unwrap();
            prop_assert_eq!(reading_order(&cur), order.clone());
        }
    }

    #[test]
    fn configuration_json_round_trips(board_ix in 0usize..7, h in 1usize..4, seed: u64) {
        let board = boards()[board_ix].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels: Vec<u8> = vec![0; h].into_iter().chain(1..=(board.len() - h) as u8).collect();
        labels.shuffle(&mut rng);
        let c = Configuration::new(board, labels).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: Configuration = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn reversed_move_is_legal_after_slide(board_ix in 0usize..7, h in 2usize..5, seed: u64) {
        let board = boards()[board_ix].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = random_config(&board, h, &mut rng);
        for _ in 0..100 {
            let moves = cur.legal_moves();
            let m = moves[rng.gen_range(0..moves.len())];
            let next = cur.apply_move(&m).unwrap();
            prop_assert!(next.find_move(m.tile_to, m.tile_from).is_some());
            cur = next;
        }
    }

    #[test]
    fn diagonal_slide_equals_two_orthogonal_slides(m1 in 2u32..6, m2 in 2u32..6, seed: u64) {
        let board = Arc::new(BoardSpec::parallelogram(m1, m2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = random_config(&board, 2, &mut rng);
        for _ in 0..100 {
            let moves = cur.legal_moves();
            for m in moves.iter().filter(|m| m.is_diagonal()) {
                let first = cur.find_move(m.tile_from, m.witness_hole).unwrap();
                let mid = cur.apply_move(&first).unwrap();
                let second = mid.find_move(m.witness_hole, m.tile_to).unwrap();
                prop_assert!(!first.is_diagonal() && !second.is_diagonal());
                prop_assert_eq!(mid.apply_move(&second).unwrap(), cur.apply_move(m).unwrap());
            }
            cur = cur.apply_move(&moves[rng.gen_range(0..moves.len())]).unwrap();
        }
    }

    #[test]
    fn returning_holes_means_even_permutation(board_ix in 0usize..7, seed: u64) {
        let board = boards()[board_ix].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = random_config(&board, 2, &mut rng);
        let mut cur = start.clone();
        for _ in 0..2000 {
            let moves = cur.legal_moves();
            cur = cur.apply_move(&moves[rng.gen_range(0..moves.len())]).unwrap();
            if cur.holes() == start.holes() {
                prop_assert_eq!(start.permutation_between(&cur).unwrap().parity(), Parity::Even);
            }
        }
    }
}
