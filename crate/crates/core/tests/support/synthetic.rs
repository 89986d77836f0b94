//! Deterministic MEDBuddy-shaped data packages for property tests and the
//! committed synthetic fixture.

use std::collections::BTreeMap;
use std::fmt::Write;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CITIES: [(&str, f64, f64); 4] =
    [("Porto", 41.1579, -8.6291), ("Lisbon", 38.7223, -9.1393), ("Braga", 41.5454, -8.4265), ("Faro", 37.0194, -7.9304)];
const STATES: [&str; 3] = ["Booked", "Held", "Cancelled"];
const GIVEN: [&str; 6] = ["Ana", "Joao", "Marta", "Rui", "Ines", "Pedro"];

fn uuid(prefix: u32, n: usize) -> String {
    format!("00000000-0000-4000-8000-{prefix:04x}{n:08x}")
}

/// `entity -> (file, CSV text)` with `facts` appointment rows. The first
/// two appointments are cancelled and the third is still open, so any
/// package with at least three rows has cancellations and null closing dates.
pub fn package(seed: u64, facts: usize) -> BTreeMap<String, (String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let large = facts >= 100;
    let mut out = BTreeMap::new();
    let mut put = |entity: &str, file: &str, text: String| {
        out.insert(entity.to_string(), (file.to_string(), text));
    };

    let cities = if large { CITIES.len() } else { rng.random_range(2..=CITIES.len()) };
    let mut t = String::from("id,latitude,longitude,name\n");
    for (i, (name, lat, lon)) in CITIES.iter().take(cities).enumerate() {
        writeln!(t, "{},{lat},{lon},{name}", uuid(0xc, i)).unwrap();
    }
    put("City", "city.csv", t);

    let institutions = if large { 6 } else { rng.random_range(2..=5) };
    let mut t = String::from("id,code,name,latitude,longitude,city,type\n");
    for i in 0..institutions {
        let city = rng.random_range(0..cities);
        let kind = if rng.random_bool(0.5) { "Hospital" } else { "HealthCentre" };
        let lat = 37.0 + rng.random_range(0..4000) as f64 / 1000.0;
        let lon = -9.0 + rng.random_range(0..1000) as f64 / 1000.0;
        writeln!(t, "{},I{i:02},Institution {i},{lat},{lon},{},{kind}", uuid(0xa, i), uuid(0xc, city)).unwrap();
    }
    put("Institution", "institution.csv", t);

    let patients = if large { 40 } else { rng.random_range(2..=12) };
    let mut t = String::from("id,nhs_number,age,name,gender,residence\n");
    for i in 0..patients {
        let gender = if rng.random_bool(0.5) { "Female" } else { "Male" };
        let name = GIVEN.choose(&mut rng).unwrap();
        let age = rng.random_range(0..95);
        let city = rng.random_range(0..cities);
        writeln!(t, "{},{},{age},{name} {i},{gender},{}", uuid(0xb, i), 1000 + i, uuid(0xc, city)).unwrap();
    }
    put("Patient", "patient.csv", t);

    let mut t = String::from("id,is_final,is_initial,name\n");
    for (i, s) in STATES.iter().enumerate() {
        writeln!(t, "{},{},{},{s}", uuid(0xd, i), i != 0, i == 0).unwrap();
    }
    put("RequestState", "request_state.csv", t);

    let days = if large { 60 } else { rng.random_range(3..=24) };
    let mut dates: Vec<chrono::NaiveDate> = (0..days)
        .map(|_| chrono::NaiveDate::from_ymd_opt(2021, 1, 1).unwrap() + chrono::Days::new(rng.random_range(0..4 * 365)))
        .collect();
    dates.sort();
    dates.dedup();
    let mut t = String::from("id,date,day,month,quarter,semester,year\n");
    for (i, d) in dates.iter().enumerate() {
        use chrono::Datelike;
        let m = d.month();
        writeln!(t, "{},{},{},{m},{},{},{}", uuid(0xe, i), d.format("%Y-%m-%d"), d.day(), (m - 1) / 3 + 1, (m - 1) / 6 + 1, d.year())
            .unwrap();
    }
    put("Time", "time.csv", t);

    let mut t = String::from(
        "id,institution,patient,state,scheduled_date,closed_date,maximum_response_time,actual_response_time,closed\n",
    );
    for i in 0..facts {
        let state = match i {
            0 | 1 => 2,
            _ => rng.random_range(0..STATES.len()),
        };
        let scheduled = rng.random_range(0..dates.len());
        let open = i == 2 || rng.random_bool(0.2);
        let closed = if open { String::new() } else { uuid(0xe, rng.random_range(scheduled..dates.len())) };
        let actual = if open || rng.random_bool(0.1) { String::new() } else { rng.random_range(0..90).to_string() };
        writeln!(
            t,
            "{},{},{},{},{},{closed},{},{actual},{}",
            uuid(0xf, i),
            uuid(0xa, rng.random_range(0..institutions)),
            uuid(0xb, rng.random_range(0..patients)),
            uuid(0xd, state),
            uuid(0xe, scheduled),
            [15, 30, 60][rng.random_range(0..3)],
            !open,
        )
        .unwrap();
    }
    put("AppointmentRequest", "appointment_request.csv", t);
    out
}

/// Manifest text for a package from [`package`].
pub fn manifest(package: &BTreeMap<String, (String, String)>) -> String {
    let mut out = String::from("# entity id = CSV file\n");
    for (entity, (file, _)) in package {
        writeln!(out, "{entity} = \"{file}\"").unwrap();
    }
    out
}
