use evcoref::crossdoc::{parse_config_code, run_door_to_door};
use evcoref::instances::InstanceConfig;
use evcoref::semgraph::{export_turtle, parse_turtle, ExportOptions};
use evcoref::synthetic::{generate, random_graph, toy_taxonomy, SyntheticSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn export_then_parse_is_identity(seed in any::<u64>()) {
        let (mut events, mut entities) = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let opts = ExportOptions::default();
        let ttl = export_turtle(&events, &entities, &opts).unwrap();
        prop_assert_eq!(&export_turtle(&events, &entities, &opts).unwrap(), &ttl);
        let (pe, pn) = parse_turtle(&ttl).unwrap();
        events.sort_by(|a, b| a.uri.cmp(&b.uri));
        entities.sort_by(|a, b| a.uri.cmp(&b.uri));
        prop_assert_eq!(pe, events);
        prop_assert_eq!(pn, entities);
    }
}

#[test]
fn door_to_door_output_round_trips() {
    let c = generate(&SyntheticSpec::default());
    let tax = toy_taxonomy();
    let run = run_door_to_door(
        &c,
        Some(&tax),
        &c.topic_ids(),
        &InstanceConfig::default(),
        &parse_config_code("YAc30p30").unwrap(),
    );
    let events: Vec<_> = run.events().cloned().collect();
    let ttl = export_turtle(&events, &run.entities, &ExportOptions::default()).unwrap();
    assert!(ttl.contains("sem:hasActor dbp:"));
    assert!(ttl.contains("nwr:non-entities/"));
    let (mut pe, pn) = parse_turtle(&ttl).unwrap();
    let mut expected = events.clone();
    expected.sort_by(|a, b| a.uri.cmp(&b.uri));
    pe.sort_by(|a, b| a.uri.cmp(&b.uri));
    assert_eq!(pe, expected);
    assert_eq!(pn, run.entities);
}

#[test]
fn configurable_base() {
    let opts = ExportOptions {
        base: "http://example.org/news/".into(),
    };
    let ttl = export_turtle(&[], &[], &opts).unwrap();
    assert!(ttl.starts_with("@prefix nwr: <http://example.org/news/> .\n"));
}
