//! Shared test fixtures.

/// Two annotated sentences about an actress entering rehab.
pub(crate) const ACTRESS_SENTENCES: &str = r#"{
  "topics": ["1"],
  "documents": [{
    "doc_id": "1_7ecb", "topic_id": "1", "subcollection": "ecb",
    "sentences": [
      [{"t":"The","c0":0,"c1":3},{"t":"actress","c0":4,"c1":11},{"t":"has","c0":12,"c1":15},
       {"t":"entered","c0":16,"c1":23},{"t":"Promises","c0":24,"c1":32}],
      [{"t":"The","c0":34,"c1":37},{"t":"actress","c0":38,"c1":45},{"t":"headed","c0":46,"c1":52},
       {"t":"to","c0":53,"c1":55},{"t":"a","c0":56,"c1":57},{"t":"Malibu","c0":58,"c1":64},
       {"t":"treatment","c0":65,"c1":74},{"t":"facility","c0":75,"c1":83},
       {"t":"on","c0":84,"c1":86},{"t":"Tuesday","c0":87,"c1":94}]
    ],
    "mentions": [
      {"id":"m1","sent":0,"t0":3,"t1":4,"c0":16,"c1":23,"slot":"action","surface":"entered","lemmas":["enter"]},
      {"id":"m2","sent":0,"t0":4,"t1":5,"c0":24,"c1":32,"slot":"location","surface":"Promises","lemmas":["promises"]},
      {"id":"m3","sent":0,"t0":1,"t1":2,"c0":4,"c1":11,"slot":"human_participant","surface":"actress","lemmas":["actress"]},
      {"id":"m4","sent":1,"t0":2,"t1":3,"c0":46,"c1":52,"slot":"action","surface":"headed","lemmas":["head"]},
      {"id":"m5","sent":1,"t0":8,"t1":10,"c0":84,"c1":94,"slot":"time","surface":"on Tuesday","lemmas":["tuesday"]},
      {"id":"m6","sent":1,"t0":3,"t1":8,"c0":53,"c1":83,"slot":"location","surface":"to a Malibu treatment facility","lemmas":["malibu","treatment","facility"]},
      {"id":"m7","sent":1,"t0":1,"t1":2,"c0":38,"c1":45,"slot":"human_participant","surface":"actress","lemmas":["actress"]}
    ]
  }],
  "gold_chains": {"c1": ["m1", "m4"]}
}"#;
