use distorder::geom::Point;
use distorder::order::{canonical_form, random_table, RankTable, Relabeling};
use distorder::realizer::{induced_order_default, search_realization, Configuration, SearchParams, SearchStatus};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), n..=5))
}

fn table() -> impl Strategy<Value = RankTable> {
    (shape(), any::<u64>()).prop_map(|((n, m), seed)| random_table(n, m, seed).unwrap())
}

fn configuration() -> impl Strategy<Value = Configuration> {
    (1usize..=3, shape()).prop_flat_map(|(dim, (n, m))| {
        let point = proptest::collection::vec(-1.0f64..1.0, dim);
        (
            proptest::collection::vec(point.clone(), n),
            proptest::collection::vec(point, m),
        )
            .prop_map(move |(p, q)| {
                let pts = |v: Vec<Vec<f64>>| v.into_iter().map(|x| Point::new(x).unwrap()).collect();
                Configuration::new(dim, pts(p), pts(q)).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn table_formats_round_trip(t in table()) {
        let text = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<RankTable>(&text).unwrap(), t.clone());
        prop_assert_eq!(RankTable::parse_digest(&t.digest()).unwrap(), t);
    }

    #[test]
    fn configurations_round_trip_exactly(c in configuration()) {
        let text = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(serde_json::from_str::<Configuration>(&text).unwrap(), c);
    }

    #[test]
    fn relabeling_points_relabels_the_order(
        (c, rows, cols) in configuration().prop_flat_map(|c| {
            let rows = Just((0..c.n()).collect::<Vec<_>>()).prop_shuffle();
            let cols = Just((0..c.m()).collect::<Vec<_>>()).prop_shuffle();
            (Just(c), rows, cols)
        })
    ) {
        let Ok(t) = induced_order_default(&c) else { return Ok(()) };
        let moved = Configuration::new(
            c.dim(),
            rows.iter().map(|&i| c.p()[i].clone()).collect(),
            cols.iter().map(|&j| c.q()[j].clone()).collect(),
        ).unwrap();
        let u = induced_order_default(&moved).unwrap();
        for i in 0..c.n() {
            for j in 0..c.m() {
                prop_assert_eq!(u.rank((i, j)), t.rank((rows[i], cols[j])));
            }
        }
    }

    #[test]
    fn canonical_form_is_a_class_invariant(t in table(), seed in any::<u64>()) {
        let (canon, r) = canonical_form(&t);
        prop_assert_eq!(r.apply(&t), canon.clone());
        let n = t.n();
        let m = t.m();
        let shuffle = Relabeling {
            rows: (0..n).rev().collect(),
            cols: (0..m).map(|j| (j + seed as usize) % m).collect(),
        };
        prop_assert_eq!(canonical_form(&shuffle.apply(&t)).0, canon);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn realizations_induce_their_target(seed in any::<u64>()) {
        let target = random_table(2, 2, seed).unwrap();
        let r = search_realization(&target, 1, &SearchParams { seed, ..SearchParams::default() }).unwrap();
        prop_assert_eq!(r.status, SearchStatus::Realized);
        prop_assert_eq!(induced_order_default(&r.best).unwrap(), target);
    }
}
