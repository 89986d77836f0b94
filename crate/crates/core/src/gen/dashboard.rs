use serde_json::{json, Value};

use crate::model::{resolve, sorted, ChartAction, SpecificationModel, UiComponent, UiEvent};

/// JSON description of every container, its components, their bound parts
/// and the navigation edges between UI elements.
///
/// Containers are listed by id; components, parts and actions keep their
/// declaration order. Object keys are sorted.
pub fn gen_dashboard_manifest(model: &SpecificationModel) -> String {
    let model = sorted(model);
    let containers: Vec<Value> = model
        .ui_containers
        .iter()
        .map(|c| {
            let mut navigation = Vec::new();
            for ev in &c.events {
                if let Some(to) = &ev.flow_to {
                    navigation.push(json!({ "from": c.id, "to": to, "trigger": format!("event:{}", ev.id) }));
                }
            }
            let components: Vec<Value> = c.components.iter().map(|comp| component(&model, comp, &mut navigation)).collect();
            json!({
                "id": c.id,
                "name": c.name,
                "type": c.container_type.as_str(),
                "subType": c.sub_type,
                "components": components,
                "events": c.events.iter().map(event).collect::<Vec<_>>(),
                "navigation": navigation,
            })
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&json!({ "containers": containers })).expect("JSON values serialize");
    out.push('\n');
    out
}

fn component(model: &SpecificationModel, comp: &UiComponent, navigation: &mut Vec<Value>) -> Value {
    let parts: Vec<Value> = comp
        .parts
        .iter()
        .map(|p| {
            let resolved = comp.data_binding.as_deref().and_then(|ctx| resolve(model, &p.binding, ctx).ok());
            json!({
                "id": p.id,
                "kind": p.kind,
                "path": p.binding.to_string(),
                "entity": resolved.as_ref().map(|r| r.entity.clone()),
                "attribute": resolved.as_ref().map(|r| r.attribute.clone()),
                "joinPath": resolved.as_ref().map(|r| r.hops.iter().map(|h| h.attribute.clone()).collect::<Vec<_>>()),
            })
        })
        .collect();
    for a in &comp.actions {
        if let Some(to) = &a.flow_to {
            navigation.push(json!({ "from": comp.id, "to": to, "trigger": format!("action:{}", a.kind) }));
        }
    }
    for ev in &comp.events {
        if let Some(to) = &ev.flow_to {
            navigation.push(json!({ "from": comp.id, "to": to, "trigger": format!("event:{}", ev.id) }));
        }
    }
    if let Some(to) = &comp.navigates_to {
        navigation.push(json!({ "from": comp.id, "to": to, "trigger": "navigatesTo" }));
    }
    json!({
        "id": comp.id,
        "name": comp.name,
        "type": comp.component_type,
        "subType": comp.sub_type,
        "chartSubtype": comp.chart_subtype(),
        "dataBinding": comp.data_binding,
        "parts": parts,
        "actions": comp.actions.iter().map(action).collect::<Vec<_>>(),
        "events": comp.events.iter().map(event).collect::<Vec<_>>(),
        "navigatesTo": comp.navigates_to,
    })
}

fn action(a: &ChartAction) -> Value {
    json!({ "kind": a.kind, "eventTypes": a.event_type, "flowTo": a.flow_to })
}

fn event(e: &UiEvent) -> Value {
    json!({ "id": e.id, "name": e.name, "eventTypes": e.event_type, "flowTo": e.flow_to })
}
