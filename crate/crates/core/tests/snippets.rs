use fermigraph::combinatorics::partitions_of;
use fermigraph::snippets::{enumerate_snippets, Snippet};
use fermigraph::Partition;
use proptest::prelude::*;

/// Component of each particle label under the block convention.
fn component_of_label(nu: &Partition) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, &part) in nu.parts().iter().enumerate() {
        out.extend(std::iter::repeat_n((i + 1) as u8, part));
    }
    out
}

#[test]
fn census_matches_multinomial() {
    for n in 1..=8 {
        for nu in partitions_of(n).unwrap() {
            let space = enumerate_snippets(&nu).unwrap();
            assert_eq!(space.len() as u128, nu.multinomial(), "{nu}");
            assert!(space.words().windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn coset_representative_is_a_section() {
    for n in 1..=6 {
        for nu in partitions_of(n).unwrap() {
            let comp = component_of_label(&nu);
            let space = enumerate_snippets(&nu).unwrap();
            for i in 0..space.len() {
                let s = space.snippet(i);
                let rep = s.coset_representative();
                let back: Vec<u8> = rep.images().iter().map(|&l| comp[l - 1]).collect();
                assert_eq!(back, s.word());
                assert_eq!(rep.sign(), s.coset_sign());
            }
        }
    }
}

#[test]
fn swaps_flip_the_sign() {
    for n in 2..=6 {
        for nu in partitions_of(n).unwrap() {
            let space = enumerate_snippets(&nu).unwrap();
            for i in 0..space.len() {
                let s = space.snippet(i);
                for k in 1..n {
                    if let Some(t) = s.adjacent_swap(k).unwrap() {
                        assert_eq!(t.coset_sign(), -s.coset_sign());
                        assert_eq!(t.adjacent_swap(k).unwrap().unwrap(), s);
                    }
                }
            }
        }
    }
}

#[test]
fn coset_representative_of_abbaacba() {
    let nu = Partition::new(vec![4, 3, 1]).unwrap();
    let s = Snippet::from_letters("abbaacba", &nu).unwrap();
    assert_eq!(s.coset_representative().to_string(), "15623874");
    assert_eq!(s.coset_sign(), -1);
}

proptest! {
    #[test]
    fn random_words(word in prop::collection::vec(1u8..4, 1..10), k in 1usize..9) {
        let mut counts = [0usize; 3];
        for &c in &word {
            counts[c as usize - 1] += 1;
        }
        // relabel so that component sizes are nonincreasing in label order
        let mut order: Vec<usize> = (0..3).filter(|&c| counts[c] > 0).collect();
        order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
        let mut relabel = [0u8; 3];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new as u8 + 1;
        }
        let word: Vec<u8> = word.iter().map(|&c| relabel[c as usize - 1]).collect();
        let nu = Partition::new(order.iter().map(|&c| counts[c]).collect::<Vec<_>>()).unwrap();
        let s = Snippet::new(word.clone(), &nu).unwrap();
        let space = enumerate_snippets(&nu).unwrap();
        let i = space.position(&word).unwrap();
        prop_assert_eq!(space.sign(i), s.coset_sign());
        if k < word.len() {
            match s.adjacent_swap(k).unwrap() {
                None => prop_assert_eq!(word[k - 1], word[k]),
                Some(t) => {
                    prop_assert_eq!(t.coset_sign(), -s.coset_sign());
                    prop_assert_eq!(space.neighbour(i, k), space.position(t.word()));
                }
            }
        } else {
            prop_assert!(s.adjacent_swap(k).is_err());
        }
    }
}
