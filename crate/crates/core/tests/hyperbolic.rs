use picman::hyperbolic::{
    approximation_tree, verify_canoeing, verify_segment_lemma, HypPoint, MetricSpaceBackend, Sampler, DEFAULT_SAMPLES,
};

#[test]
fn sampled_canoe_chains() {
    let space = MetricSpaceBackend::hyperboloid(2, 1024).unwrap();
    let theta = space.theta();
    let mut s = Sampler::new(2, 1024, 11).unwrap();
    for k in 0..20 {
        let chain = s.canoe_chain(3 + k % 4, &theta).unwrap();
        let v = verify_canoeing(&space, &chain, &theta);
        assert!(v.passed(), "{v:?}");
        assert!(v.margins.iter().all(|(_, m)| m.to_hp(64).error_f64() < 1e-9));
    }
}

#[test]
fn sampled_segment_lemmas() {
    let space = MetricSpaceBackend::hyperboloid(2, 512).unwrap();
    let theta = space.theta();
    let mut s = Sampler::new(2, 512, 5).unwrap();
    for _ in 0..10 {
        for cfg in [
            s.obtuse_instance(6.0).unwrap(),
            s.endpoint_instance(&theta, true).unwrap(),
            s.endpoint_instance(&theta, false).unwrap(),
        ] {
            let v = verify_segment_lemma(&space, &cfg, &theta, DEFAULT_SAMPLES / 4).unwrap_or_else(|e| panic!("{e} {cfg:?}"));
            assert!(v.passed(), "{v:?}");
            for (_, m) in &v.margins {
                assert!(m.to_hp(64).error_f64() < 1e-9, "{m}");
            }
        }
    }
}

#[test]
fn five_point_trees() {
    let space = MetricSpaceBackend::hyperboloid(2, 256).unwrap();
    let bound = space.theta();
    let mut s = Sampler::new(2, 256, 3).unwrap();
    for _ in 0..10 {
        let pts: Vec<HypPoint> = s.points(5, 6.0).unwrap();
        let t = approximation_tree(&space, &pts).unwrap();
        let d = t.distortion(&space, &pts, 4).unwrap();
        assert!(d.within(&bound), "{d:?}");
    }
}
