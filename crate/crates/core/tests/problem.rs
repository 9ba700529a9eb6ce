mod common;

use mumall::formula::{check_monotonic, Fixpoint, Formula};
use mumall::problem::parse_problem_file;
use mumall::syntax::parse_formula;
use mumall::term::Symbol;

const STEP_PATH: &str = "signature a/0 b/0 c/0.\n\
    step a b.   step b c.    step c b.\n\
    path X Z :- step X Z.\n\
    path X Z :- step X Y, path Y Z.\n\
    goal reach: |- path a c.\n";

const STEP: &str = "mu(step; X1, X2; (X1 = a /\\+ X2 = b) \\/ (X1 = b /\\+ X2 = c) \\/ (X1 = c /\\+ X2 = b))";

#[test]
fn horn_clauses_compile_to_fixed_points() {
    let pf = parse_problem_file(STEP_PATH).unwrap();
    let expected = parse_formula(
        &format!("mu(path; X, Z; {STEP}(X, Z) \\/ (exists Y, {STEP}(X, Y) /\\+ path(Y, Z)))(a, c)"),
        &pf.signature,
        &[],
    )
    .unwrap();
    let goal = &pf.goal("reach").unwrap().sequent;
    assert!(goal.right[0].alpha_eq(&expected), "{}", goal.right[0]);
    let step = pf.definitions.get(&Symbol::new("step")).unwrap();
    assert_eq!(step.kind, Fixpoint::Mu);
}

#[test]
fn corpus_definitions_are_monotonic() {
    for file in ["subset.mu", "graph.mu", "arith.mu", "nat.mu", "bisim.mu"] {
        let (_, pf) = common::load(file);
        for name in pf.definitions.names() {
            let def = pf.definitions.get(name).unwrap();
            assert!(check_monotonic(&def.abstraction), "{file}: {name}");
        }
    }
}

#[test]
fn numerals_need_zero_and_successor() {
    let pf = parse_problem_file("signature z/0 s/1.\ngoal g: |- 2 = s(s(z)).\n").unwrap();
    let g = &pf.goal("g").unwrap().sequent;
    assert!(g.vars.is_empty() && g.left.is_empty());
    let Formula::Eq(t, s) = &g.right[0] else { panic!() };
    assert_eq!(t, s);

    let pf = parse_problem_file("signature 0/0.\ngoal g: |- 0 = 0.\n").unwrap();
    assert_eq!(pf.goal("g").unwrap().sequent.right[0].to_string(), "0 = 0");
    assert!(parse_problem_file("signature a/0.\ngoal g: |- 0 = 0.\n").is_err());
}

#[test]
fn arithmetic_definitions_match_their_fixed_points() {
    let (_, pf) = common::load("arith.mu");
    let lt = "mu(lt; X, Y; (X = z /\\+ (exists Y', Y = s(Y'))) \\/ \
              (exists X' Y', X = s(X') /\\+ Y = s(Y') /\\+ lt(X', Y')))(z, s(z))";
    let expected = parse_formula(lt, &pf.signature, &[]).unwrap();
    let got = pf.definitions.instance(&Symbol::new("lt"), vec![
        parse_term("z", &pf),
        parse_term("s(z)", &pf),
    ]);
    assert!(got.unwrap().alpha_eq(&expected));
}

fn parse_term(src: &str, pf: &mumall::problem::ProblemFile) -> mumall::term::Term {
    mumall::syntax::parse_term(src, &pf.signature, &[]).unwrap()
}

fn error_of(src: &str) -> String {
    parse_problem_file(src).unwrap_err().to_string()
}

#[test]
fn errors_carry_positions() {
    let e = parse_problem_file("signature a/0.\ngoal g: |- a = .\n").unwrap_err();
    assert_eq!((e.line, e.col), (2, 16));
    assert!(error_of("signature a/0.\ngoal g: |- a = a\n").contains("missing `.`"));
}

#[test]
fn rejected_files() {
    assert!(error_of("signature a/0 f/1.\ngoal g: |- f(a, a) = a.\n").contains("arguments"));
    assert!(error_of("signature a/0.\ngoal g: |- b = a.\n").contains("`b`"));
    assert!(error_of("signature a/0.\ndefine p X := p X => false.\ngoal g: |- p a.\n").contains("monotonic"));
    assert!(error_of("signature a/0.\ngoal g: |- a = a.\ngoal g: |- a = a.\n").contains("declared twice"));
    assert!(error_of("signature a/0.\nq a.\nq a a.\n").contains("arity"));
}

#[test]
fn goals_keep_declaration_order() {
    let (_, pf) = common::load("graph.mu");
    let names: Vec<&str> = pf.goals.iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["not_adjacent", "reach", "unreachable"]);
}

#[test]
fn capitalized_goal_names_are_eigenvariables() {
    let pf = parse_problem_file("signature a/0.\ngoal g: X = a |- X = a.\n").unwrap();
    let g = &pf.goal("g").unwrap().sequent;
    assert!(g.vars.contains(&Symbol::new("X")));
}
