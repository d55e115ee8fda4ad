use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    System,
    Alice,
    Bob,
    Charlie,
    Eve,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub step: u8,
    pub actor: Actor,
    pub event: String,
    /// Sent over the authenticated public channel.
    pub public: bool,
    pub payload: Value,
}

/// Ordered record of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn private(&mut self, step: u8, actor: Actor, event: &str, payload: Value) {
        self.push(step, actor, event, false, payload);
    }

    pub(crate) fn public(&mut self, step: u8, actor: Actor, event: &str, payload: Value) {
        self.push(step, actor, event, true, payload);
    }

    fn push(&mut self, step: u8, actor: Actor, event: &str, public: bool, payload: Value) {
        self.events.push(Event {
            step,
            actor,
            event: event.to_string(),
            public,
            payload,
        });
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn find<'a>(&'a self, event: &'a str) -> impl Iterator<Item = &'a Event> + 'a {
        self.events.iter().filter(move |e| e.event == event)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        out
    }
}
