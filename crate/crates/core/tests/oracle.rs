mod common;

use common::q;
use densicohom::cohomology::compute;
use densicohom::oracle::{
    coboundary_source_rank, invariant_operator_dim, source_count, stabilized_h1, truncated_h1, TruncationBox,
};
use densicohom::params::ParamSpace;

fn points() -> Vec<ParamSpace> {
    [("0", "1"), ("1/2,1/2", "3"), ("1/4", "3/4"), ("0,0", "1"), ("-1/2", "3/2"), ("1,1", "2")]
        .into_iter()
        .map(|(l, m)| ParamSpace::parse(l, m).unwrap())
        .collect()
}

#[test]
fn cocycles_and_coboundaries_grow_with_the_box() {
    for params in points() {
        let boxes = [
            TruncationBox::new(1, 2, 1),
            TruncationBox::new(1, 3, 1),
            TruncationBox::new(2, 3, 2),
            TruncationBox::new(2, 4, 3),
        ];
        let results: Vec<_> = boxes.iter().map(|b| truncated_h1(&params, b).unwrap()).collect();
        for w in results.windows(2) {
            assert!(w[0].cocycle_dim <= w[1].cocycle_dim, "{params:?}");
            assert!(w[0].coboundary_dim <= w[1].coboundary_dim, "{params:?}");
        }
    }
}

#[test]
fn coboundary_rank_plus_invariants_is_source_count() {
    for params in points() {
        for bx in [TruncationBox::new(1, 2, 1), TruncationBox::new(2, 3, 2), TruncationBox::new(3, 2, 0)] {
            let sources = bx.source_box();
            assert_eq!(
                coboundary_source_rank(&params, &bx).unwrap(),
                source_count(&params, &bx).unwrap() - invariant_operator_dim(&params, &sources).unwrap()
            );
        }
    }
}

#[test]
fn transvectant_is_counted_as_invariant() {
    // the bilinear bracket of order 1 from weights (1/2, 1/2): f′g − fg′ is invariant at μ = 2
    let params = ParamSpace::parse("1/2,1/2", "2").unwrap();
    assert_eq!(invariant_operator_dim(&params, &TruncationBox::new(1, 2, 0)).unwrap(), 1);
    // at μ = 1 only the product
    let params = ParamSpace::parse("1/2,1/2", "1").unwrap();
    assert_eq!(invariant_operator_dim(&params, &TruncationBox::new(1, 2, 0)).unwrap(), 1);
}

#[test]
fn oracle_matches_engine_beyond_the_acceptance_grid() {
    for (lambda, k) in [("-1/2,-1", 3), ("-1,-1", 3), ("0,-1/2,0", 1), ("-1/2,-1/2,-1/2", 2), ("1/3,-1", 3)] {
        let params = ParamSpace::with_delta(densicohom::params::parse_list(lambda).unwrap(), q(k, 1)).unwrap();
        let s = stabilized_h1(&params, &TruncationBox::default_for(&params), 5).unwrap();
        assert!(s.stabilized);
        assert_eq!(s.dim, Some(compute(&params).unwrap().dim_h1), "{lambda} k={k}");
    }
}

#[test]
fn undersized_box_warns_in_stabilization_result() {
    // order 0 cannot hold the first-order classes at k = 2
    let params = ParamSpace::parse("1/2,1/2", "3").unwrap();
    let s = stabilized_h1(&params, &TruncationBox::new(0, 1, 0), 2).unwrap();
    assert!(!s.warnings.is_empty());
    let json = serde_json::to_value(&s).unwrap();
    assert!(json.get("dim").is_some() && json.get("stabilized").is_some() && json.get("steps").is_some());
}
