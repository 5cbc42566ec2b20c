use pva_cli::parse::parse_bracket_file;
use pva_cli::print::print_definition;
use pva_core::diffalg::{MultiIndex, Space};
use pva_core::lambda::{BracketTable, LambdaMono, LambdaPoly};
use pva_core::sampling::{self, SampleBounds};
use rand::Rng;

fn random_table(seed: u64) -> (Vec<String>, BracketTable) {
    let mut rng = sampling::rng(seed);
    let dim = rng.gen_range(1..=3);
    let gens = rng.gen_range(1..=2);
    let s = Space::new(dim, gens).unwrap();
    let mut entries = Vec::new();
    for _ in 0..gens * gens {
        let mut e = LambdaPoly::zero(s);
        for _ in 0..rng.gen_range(0..=3) {
            let idx: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..=2)).collect();
            let p = sampling::random_diffpoly(s, &mut rng, SampleBounds::default());
            e.add_assign(&LambdaPoly::monomial(LambdaMono::lambda(MultiIndex::new(&idx)), p));
        }
        entries.push(e);
    }
    let names = ["u", "v"][..gens].iter().map(|n| n.to_string()).collect();
    (names, BracketTable::from_entries(s, entries).unwrap())
}

#[test]
fn print_parse_is_a_fixpoint() {
    for seed in 0..200 {
        let (names, table) = random_table(seed);
        let text = print_definition(&names, &table).unwrap();
        let back = parse_bracket_file(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(back.table, table, "{text}");
        assert_eq!(back.names, names);
        assert_eq!(print_definition(&back.names, &back.table).unwrap(), text);
    }
}

#[test]
fn builtins_round_trip() {
    for (names, table) in [
        (vec!["w".to_string()], pva_core::models::euler_bracket().table),
        (
            vec!["p1".into(), "p2".into()],
            pva_core::models::epdiff_bracket(2).unwrap().table,
        ),
    ] {
        let text = print_definition(&names, &table).unwrap();
        assert_eq!(parse_bracket_file(&text).unwrap().table, table);
    }
}
