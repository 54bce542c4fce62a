use proptest::prelude::*;
use raspvisor::lang::{parse, parse_source, pretty_print, pretty_print_indented, tokenize};
use raspvisor::sampler::Sampler;
use raspvisor::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(len in prop::sample::select(vec![16usize, 21, 23, 26, 40, 60, 100, 150]), seed in any::<u64>(), index in 0u64..1000) {
        let f = Sampler::new(len).unwrap().sample(seed, index);
        for text in [pretty_print(&f), pretty_print_indented(&f)] {
            let toks = tokenize(&text).unwrap();
            prop_assert_eq!(toks.len(), len);
            prop_assert_eq!(&parse(&toks).unwrap(), &f);
        }
    }
}

#[test]
fn whitespace_is_insignificant() {
    let a = parse_source("fun f0(ipt:W^2)->W^1{opt[0]=ipt[1]*3;hlt}").unwrap();
    let b = parse_source("fun  f0 (\n ipt : W ^ 2 )\t-> W ^ 1 {\n  opt [ 0 ] = ipt [ 1 ] * 3 ;\n  hlt\n}").unwrap();
    assert_eq!(a, b);
    assert_eq!(a.token_len(), 28);
}

#[test]
fn malformed_sources_are_rejected() {
    for src in [
        "",
        "fun f0 ( ipt : W ^ 0 ) -> W ^ 1 { hlt }",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { }",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { ipt[0] = 1 }",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { opt[10] = 1 }",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { opt[0] = 12 }",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { hlt ; opt[0] = 1 }",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { opt[0] = 1 ; }",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { opt[0] = 1 + 2 }",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { hlt } extra",
        "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { opt[0] = $ }",
    ] {
        assert!(
            matches!(parse_source(src), Err(Error::Lex(_) | Error::Parse(_))),
            "accepted {src:?}"
        );
    }
}
