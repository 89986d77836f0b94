use super::Sink;
use crate::diag::Diagnostic;
use crate::model::{key, resolve, vocab, SourceMap, SpecificationModel, UiComponent, VocabCategory};

/// Parts every chart of a subtype must have.
pub fn required_parts(chart_subtype: &str) -> &'static [&'static str] {
    match chart_subtype {
        vocab::BAR_CHART | vocab::LINE_CHART | vocab::SCATTER_PLOT => &["X_Axis", "Y_Axis"],
        vocab::PIE_CHART => &["Label", "Value"],
        vocab::GEO_MAP => &["Latitude", "Longitude", "Value"],
        _ => &[],
    }
}

pub fn check_ui(model: &SpecificationModel, spans: &SourceMap) -> Vec<Diagnostic> {
    let mut s = Sink::new(spans);
    for c in &model.ui_containers {
        for comp in &c.components {
            component(model, &c.id, comp, &mut s);
        }
        for ev in &c.events {
            if let Some(to) = &ev.flow_to {
                if !navigable(model, to) {
                    s.error(
                        "SEM034",
                        format!("event `{}` of `{}` flows to unknown element `{to}`", ev.id, c.id),
                        &[key::container_event(&c.id, &ev.id), key::container(&c.id)],
                    );
                }
            }
        }
    }
    s.finish()
}

fn component(model: &SpecificationModel, container: &str, comp: &UiComponent, s: &mut Sink<'_>) {
    let at = [key::component(container, &comp.id)];
    let context = match comp.data_binding.as_deref() {
        Some(b) if model.entity(b).is_some() || model.cluster(b).is_some() => Some(b),
        Some(b) => {
            s.error(
                "SEM030",
                format!("`{}` is bound to `{b}`, which is not an entity or cluster", comp.id),
                &[key::binding(container, &comp.id), at[0].clone()],
            );
            None
        }
        None => {
            if !comp.parts.is_empty() {
                s.error("SEM030", format!("`{}` has parts but no data binding", comp.id), &at);
            }
            None
        }
    };
    if let Some(ctx) = context {
        for (i, p) in comp.parts.iter().enumerate() {
            if let Err(err) = resolve(model, &p.binding, ctx) {
                s.error(
                    "SEM031",
                    format!("part `{}` of `{}`: `{}` does not resolve from `{ctx}`: {err}", p.id, comp.id, p.binding),
                    &[key::part(container, &comp.id, i), at[0].clone()],
                );
            }
        }
    }

    let is_chart = comp.component_type == vocab::INTERACTIVE_CHART;
    let chart_sub = comp.sub_type.as_deref().filter(|t| vocab::CHART_SUBTYPES.contains(t));
    match (is_chart, chart_sub) {
        (true, None) => s.error("SEM032", format!("chart `{}` has no chart subtype", comp.id), &at),
        (false, Some(sub)) => s.error(
            "SEM032",
            format!("`{}` has chart subtype {sub} but is a {}", comp.id, comp.component_type),
            &at,
        ),
        (true, Some(sub)) => {
            let missing: Vec<&str> = required_parts(sub)
                .iter()
                .copied()
                .filter(|k| !comp.parts.iter().any(|p| p.kind == *k))
                .collect();
            if !missing.is_empty() {
                s.error("SEM032", format!("{sub} `{}` lacks required part {}", comp.id, missing.join(", ")), &at);
            }
        }
        (false, None) => {}
    }

    for (i, a) in comp.actions.iter().enumerate() {
        let known = vocab::CHART_ACTIONS.contains(&a.kind.as_str()) || model.has_extension(VocabCategory::ActionType, &a.kind);
        if !known {
            s.error(
                "SEM033",
                format!("`{}` is not a chart action; declare it as an ActionType to use it", a.kind),
                &[key::action(container, &comp.id, i), at[0].clone()],
            );
        }
        if let Some(to) = &a.flow_to {
            if !navigable(model, to) {
                s.error(
                    "SEM034",
                    format!("action `{}` of `{}` flows to unknown element `{to}`", a.kind, comp.id),
                    &[key::action(container, &comp.id, i), at[0].clone()],
                );
            }
        }
    }
    for ev in &comp.events {
        if let Some(to) = &ev.flow_to {
            if !navigable(model, to) {
                s.error(
                    "SEM034",
                    format!("event `{}` of `{}` flows to unknown element `{to}`", ev.id, comp.id),
                    &[key::component_event(container, &comp.id, &ev.id), at[0].clone()],
                );
            }
        }
    }
    if let Some(to) = &comp.navigates_to {
        if model.container(to).is_none() {
            s.error(
                "SEM034",
                format!("`{}` navigates to `{to}`, which is not a container", comp.id),
                &[key::navigation(container, &comp.id), at[0].clone()],
            );
        }
    }
}

/// Events may flow to a container or to a component of any container.
fn navigable(model: &SpecificationModel, id: &str) -> bool {
    model.container(id).is_some() || model.ui_containers.iter().any(|c| c.components.iter().any(|x| x.id == id))
}
