//! Writing a Foo class by hand, type checking it and reducing a member
//! access step by step, including a conversion that gets stuck.
//!
//! `cargo run --example foo_calculus`

use typeprov::data::DataValue;
use typeprov::foo::{
    check_classes, evaluate, evaluate_traced, typecheck, ClassDef, ClassSet, Env, Expr, FooType, MemberDef, Prim,
    DEFAULT_FUEL,
};

fn main() {
    // type Person(x : Data) = member Name : string = convField(•, name, x, λy. convPrim(string, y))
    let name_body = Expr::conv_field(
        "•",
        "name",
        Expr::var("x"),
        Expr::lam("y", FooType::Data, Expr::ConvPrim(Prim::Text, Box::new(Expr::var("y")))),
    );
    let mut classes = ClassSet::new();
    classes.insert(ClassDef {
        name: "Person".into(),
        params: vec![("x".into(), FooType::Data)],
        members: vec![MemberDef { name: "Name".into(), ty: FooType::Text, body: name_body }],
    });
    check_classes(&classes).unwrap();
    println!("{classes}\n");

    let jan = DataValue::object(vec![("name", DataValue::str("Jan"))]);
    let e = Expr::member(Expr::New("Person".into(), vec![Expr::data(jan)]), "Name");
    println!("{e} : {}", typecheck(&classes, &Env::new(), &e).unwrap());
    let v = evaluate_traced(&classes, &e, DEFAULT_FUEL, |step| println!("  -> {step}")).unwrap();
    println!("value: {v}\n");

    let bad = DataValue::object(vec![("name", DataValue::Int(1))]);
    let e = Expr::member(Expr::New("Person".into(), vec![Expr::data(bad)]), "Name");
    println!("{e}\n  {}", evaluate(&classes, &e, DEFAULT_FUEL).unwrap());
}
