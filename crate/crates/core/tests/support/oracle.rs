//! A deliberately naive, MEDBuddy-specific re-implementation of the engine's
//! semantics: nested loops over raw CSV records, string group keys and
//! measures recomputed from their definitions by hand.

use std::collections::{BTreeMap, HashMap};

pub type Record = HashMap<String, String>;

fn records(text: &str) -> Vec<Record> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(str::to_string).collect();
    r.records()
        .map(|rec| header.iter().cloned().zip(rec.unwrap().iter().map(str::to_string)).collect())
        .collect()
}

pub struct Data {
    pub tables: HashMap<String, Vec<Record>>,
}

impl Data {
    pub fn new(sources: &BTreeMap<String, (String, String)>) -> Self {
        Data { tables: sources.iter().map(|(e, (_, text))| (e.clone(), records(text))).collect() }
    }

    pub fn facts(&self) -> Vec<&Record> {
        self.tables["AppointmentRequest"].iter().collect()
    }

    /// The record of `entity` whose id is `id`, found by linear scan.
    pub fn lookup(&self, entity: &str, id: &str) -> Option<&Record> {
        if id.is_empty() {
            return None;
        }
        self.tables[entity].iter().find(|r| r["id"] == id)
    }

    /// Group key of a fact row as text; a broken join gives "(null)".
    pub fn key(&self, fact: &Record, key: Key) -> String {
        let null = || "(null)".to_string();
        let inst = || self.lookup("Institution", &fact["institution"]);
        let pat = || self.lookup("Patient", &fact["patient"]);
        match key {
            Key::InstitutionCity => inst()
                .and_then(|i| self.lookup("City", &i["city"]))
                .map_or_else(null, |c| c["name"].clone()),
            Key::ScheduledYear => self.lookup("Time", &fact["scheduled_date"]).map_or_else(null, |t| t["year"].clone()),
            Key::Gender => pat().map_or_else(null, |p| p["gender"].clone()),
            Key::InstitutionName => inst().map_or_else(null, |i| i["name"].clone()),
            Key::InstitutionType => inst().map_or_else(null, |i| i["type"].clone()),
            Key::Age => pat().map_or_else(null, |p| p["age"].clone()),
            Key::Residence => pat()
                .and_then(|p| self.lookup("City", &p["residence"]))
                .map_or_else(null, |c| c["name"].clone()),
            Key::ClosedDate => self.lookup("Time", &fact["closed_date"]).map_or_else(null, |t| t["date"].clone()),
            Key::State => self.lookup("RequestState", &fact["state"]).map_or_else(null, |s| s["name"].clone()),
            Key::FactId => fact["id"].clone(),
        }
    }

    pub fn group<'a>(&'a self, facts: &[&'a Record], keys: &[Key]) -> BTreeMap<Vec<String>, Vec<&'a Record>> {
        let mut out: BTreeMap<Vec<String>, Vec<&Record>> = BTreeMap::new();
        for f in facts {
            out.entry(keys.iter().map(|k| self.key(f, *k)).collect()).or_default().push(f);
        }
        out
    }

    pub fn measures(&self, facts: &[&Record]) -> Measures {
        let mut count = 0i64;
        let mut cancelled = 0i64;
        let mut wait_sum = 0.0;
        let mut wait_n = 0usize;
        let mut dates: Vec<String> = Vec::new();
        for f in facts {
            if !f["id"].is_empty() {
                count += 1;
            }
            if self.lookup("RequestState", &f["state"]).is_some_and(|s| s["name"] == "Cancelled") {
                cancelled += 1;
            }
            if !f["actual_response_time"].is_empty() {
                wait_sum += f["actual_response_time"].parse::<f64>().unwrap();
                wait_n += 1;
            }
            if let Some(t) = self.lookup("Time", &f["scheduled_date"]) {
                dates.push(t["date"].clone());
            }
        }
        Measures {
            count,
            cancelled,
            rate: (count != 0).then(|| cancelled as f64 / count as f64),
            avg_wait: (wait_n != 0).then(|| wait_sum / wait_n as f64),
            min_date: dates.iter().min().cloned(),
            max_date: dates.iter().max().cloned(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Key {
    InstitutionCity,
    ScheduledYear,
    Gender,
    InstitutionName,
    InstitutionType,
    Age,
    Residence,
    ClosedDate,
    State,
    FactId,
}

impl Key {
    pub const ALL: [Key; 10] = [
        Key::InstitutionCity,
        Key::ScheduledYear,
        Key::Gender,
        Key::InstitutionName,
        Key::InstitutionType,
        Key::Age,
        Key::Residence,
        Key::ClosedDate,
        Key::State,
        Key::FactId,
    ];

    /// The same grouping as an attribute path over AppointmentRequest.
    pub fn path(self) -> &'static str {
        match self {
            Key::InstitutionCity => "Institution.city",
            Key::ScheduledYear => "AppointmentRequest.scheduled_date.year",
            Key::Gender => "Patient.gender",
            Key::InstitutionName => "Institution.name",
            Key::InstitutionType => "Institution.type",
            Key::Age => "Patient.age",
            Key::Residence => "Patient.residence",
            Key::ClosedDate => "AppointmentRequest.closed_date",
            Key::State => "AppointmentRequest.state",
            Key::FactId => "AppointmentRequest.id",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measures {
    pub count: i64,
    pub cancelled: i64,
    pub rate: Option<f64>,
    pub avg_wait: Option<f64>,
    pub min_date: Option<String>,
    pub max_date: Option<String>,
}

/// Measure columns of AppointmentRequest, in declaration order.
pub const MEASURES: [&str; 6] =
    ["CountAppointments", "CountCancelledAppointments", "CancellationRate", "AvgWaitingTime", "MinDate", "MaxDate"];
