#![allow(dead_code)]

use dfol::foliation::{hamiltonian_foliation, FoliationPresentation};
use dfol::{vars, Poly};

pub struct Entry {
    pub name: &'static str,
    pub foliation: FoliationPresentation,
}

pub fn field(names: &[&str], fields: &[&str]) -> FoliationPresentation {
    let v = vars(names).unwrap();
    FoliationPresentation::parse(&v, fields).unwrap()
}

pub fn euler() -> FoliationPresentation {
    field(&["x", "y"], &["x*dx + y*dy"])
}

pub fn diagonal() -> FoliationPresentation {
    field(&["x", "y"], &["x*dx", "y*dy"])
}

pub fn translation() -> FoliationPresentation {
    field(&["x", "y"], &["dx"])
}

pub fn symplectic() -> FoliationPresentation {
    let v = vars(&["x", "y"]).unwrap();
    let p = |s: &str| Poly::parse(s, &v).unwrap();
    hamiltonian_foliation(&v, &[vec![p("0"), p("1")], vec![p("-1"), p("0")]]).unwrap()
}

pub fn linear_poisson() -> FoliationPresentation {
    let v = vars(&["x", "y"]).unwrap();
    let p = |s: &str| Poly::parse(s, &v).unwrap();
    hamiltonian_foliation(&v, &[vec![p("0"), p("x")], vec![p("-x"), p("0")]]).unwrap()
}

pub fn corpus() -> Vec<Entry> {
    let e = |name, foliation| Entry { name, foliation };
    vec![
        e("euler", euler()),
        e("diagonal", diagonal()),
        e("translation", translation()),
        e("symplectic", symplectic()),
        e("x*dx on C", field(&["x"], &["x*dx"])),
        e("dx on C", field(&["x"], &["dx"])),
        e("x*dy", field(&["x", "y"], &["x*dy"])),
        e("dx, y*dy", field(&["x", "y"], &["dx", "y*dy"])),
        e("poisson x", linear_poisson()),
        e("sl2 pair", field(&["x", "y"], &["x*dy", "y*dx"])),
    ]
}
