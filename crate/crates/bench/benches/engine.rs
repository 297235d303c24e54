use criterion::{black_box, criterion_group, criterion_main, Criterion};

use secretpi::encodings::{dbus, dbus_equation, example2};
use secretpi::gen::{GenConfig, TermGen};
use secretpi::suite::harmony_discrepancies;
use secretpi::{bisimilar, build_graph, normalize, parse, pretty, reach, Bounds, Mode, NameBudget};

fn engine(c: &mut Criterion) {
    let bus = dbus(false);
    let bounds = Bounds::default();
    c.bench_function("normalize dbus", |b| b.iter(|| normalize(black_box(&bus))));
    c.bench_function("reach dbus", |b| b.iter(|| reach(black_box(&bus), &bounds)));

    let ex = example2(3, &[1, 2], 2).unwrap().filled;
    let budget = NameBudget::new(ex.free_names(), 1);
    c.bench_function("lts example2", |b| {
        b.iter(|| build_graph(black_box(&ex), Mode::Spied, &budget, 5000).unwrap())
    });

    let (u, rhs) = dbus_equation();
    c.bench_function("bisim dbus patch", |b| {
        b.iter(|| bisimilar(&u, &rhs, Mode::Spied, &bounds, 1).unwrap())
    });

    let corpus = TermGen::new(1, GenConfig::harmony()).terms(100);
    c.bench_function("harmony 100 terms", |b| {
        b.iter(|| harmony_discrepancies(black_box(&corpus)))
    });

    let texts: Vec<String> = TermGen::new(2, GenConfig::general())
        .terms(200)
        .iter()
        .map(pretty)
        .collect();
    c.bench_function("parse 200 terms", |b| {
        b.iter(|| texts.iter().map(|t| parse(t).unwrap()).collect::<Vec<_>>())
    });
}

criterion_group!(benches, engine);
criterion_main!(benches);
