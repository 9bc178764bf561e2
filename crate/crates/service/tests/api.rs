use std::time::Duration;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use softscale_service::{router, ServiceConfig};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn documents(collection: &str, dataset: &str) -> Value {
    json!({
        "ontology": fixture("person.ckml.xml"),
        "collection": fixture(collection),
        "dataset": dataset,
    })
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header(header::CONTENT_TYPE, "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn age_space(app: &Router) -> u64 {
    let (status, body) =
        send(app, "POST", "/spaces", Some(documents("people-attrs.ckml.xml", &fixture("people.csv")))).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    assert_eq!(body["concepts"], 7);
    body["spaceId"].as_u64().unwrap()
}

async fn session(app: &Router, space: u64) -> u64 {
    let (status, body) = send(app, "POST", &format!("/spaces/{space}/sessions"), None).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["sessionId"].as_u64().unwrap()
}

fn row<'a>(state: &'a Value, kind: &str, name: &str) -> &'a Value {
    state["elements"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["kind"] == kind && r["name"] == name)
        .unwrap_or_else(|| panic!("no {kind} {name}"))
}

fn names(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

#[tokio::test]
async fn meet_working() {
    let app = router(ServiceConfig::default());
    let space = age_space(&app).await;
    let s = session(&app, space).await;
    let (status, state) =
        send(&app, "POST", &format!("/sessions/{s}/meet"), Some(json!({"elements": ["working"]}))).await;
    assert_eq!(status, StatusCode::OK, "{state}");
    assert_eq!(names(&state["current"]["extent"]), ["Adam", "Betty", "Eva", "Harry"]);
    assert_eq!(names(&state["current"]["objectLabels"]), ["Betty", "Harry"]);
    assert_eq!(row(&state, "attribute", "working")["relation"], "Intent");
    assert_eq!(row(&state, "attribute", "young")["relation"], "Descendant");
    assert_eq!(row(&state, "attribute", "old")["relation"], "Similar");
    assert_eq!(row(&state, "object", "Fred")["relation"], "Ancestor");
    assert_eq!(row(&state, "object", "Eva")["relation"], "Extent");
    assert_eq!(state["operation"], "meet");
    assert_eq!(state["definition"], json!([{"kind": "attribute", "name": "working"}]));
}

#[tokio::test]
async fn lattice_units_and_incompatible_meets() {
    let app = router(ServiceConfig::default());
    let space = age_space(&app).await;
    let s = session(&app, space).await;
    let (_, lattice) = send(&app, "GET", &format!("/spaces/{space}/lattice"), None).await;
    let (top, bottom) = (lattice["top"].clone(), lattice["bottom"].clone());

    let elements = json!({"elements": [{"kind": "attribute", "name": "working"}, "attribute:retired"]});
    let (_, state) = send(&app, "POST", &format!("/sessions/{s}/meet"), Some(elements)).await;
    assert_eq!(state["current"]["id"], bottom);
    assert!(state["current"]["extent"].as_array().unwrap().is_empty());

    let (_, state) = send(&app, "POST", &format!("/sessions/{s}/meet"), Some(json!({"elements": []}))).await;
    assert_eq!(state["current"]["id"], top);
    let (_, state) = send(&app, "POST", &format!("/sessions/{s}/join"), Some(json!({"elements": []}))).await;
    assert_eq!(state["current"]["id"], bottom);
    let (_, state) =
        send(&app, "POST", &format!("/sessions/{s}/join"), Some(json!({"elements": ["minor", "old"]}))).await;
    assert_eq!(state["current"]["id"], top);
}

#[tokio::test]
async fn similarity_is_meet_extent_cardinality() {
    let app = router(ServiceConfig::default());
    let space = age_space(&app).await;
    let s = session(&app, space).await;
    let (_, lattice) = send(&app, "GET", &format!("/spaces/{space}/lattice"), None).await;
    let extent = |id: &Value| -> Vec<String> {
        let c = &lattice["concepts"][id.as_u64().unwrap() as usize];
        c["extent"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
    };
    let (_, state) =
        send(&app, "POST", &format!("/sessions/{s}/join"), Some(json!({"elements": ["Adam", "Chris"]}))).await;
    let current = extent(&state["current"]["id"]);
    for r in state["elements"].as_array().unwrap() {
        let shared = extent(&r["concept"]).iter().filter(|g| current.contains(g)).count();
        assert_eq!(r["similarity"], shared, "{r}");
    }
    assert_eq!(row(&state, "attribute", "young")["similarity"], 2);
}

#[tokio::test]
async fn fresh_sessions_see_shared_views() {
    let app = router(ServiceConfig::default());
    let space = age_space(&app).await;
    let a = session(&app, space).await;
    // the anonymous concept young ∧ working gets a name
    send(&app, "POST", &format!("/sessions/{a}/meet"), Some(json!({"elements": ["young", "working"]}))).await;
    let (status, view) =
        send(&app, "POST", &format!("/sessions/{a}/views"), Some(json!({"name": "youth", "owner": "wolff"}))).await;
    assert_eq!(status, StatusCode::CREATED, "{view}");
    assert_eq!(view["owner"], "wolff");
    let (_, state) = send(&app, "GET", &format!("/sessions/{a}/state"), None).await;
    assert_eq!(row(&state, "view", "youth")["relation"], "Equivalent");
    assert_eq!(names(&state["localViews"]), ["youth"]);

    send(&app, "POST", &format!("/sessions/{a}/meet"), Some(json!({"elements": []}))).await;
    send(&app, "POST", &format!("/sessions/{a}/views"), Some(json!({"name": "everyone"}))).await;

    let b = session(&app, space).await;
    let (_, state) = send(&app, "GET", &format!("/sessions/{b}/state"), None).await;
    assert_eq!(state["current"]["id"], 0);
    assert_eq!(row(&state, "view", "youth")["relation"], "Descendant");
    assert_eq!(row(&state, "view", "everyone")["relation"], "Equivalent");
    let (_, state) =
        send(&app, "POST", &format!("/sessions/{b}/meet"), Some(json!({"elements": ["view:youth"]}))).await;
    assert_eq!(names(&state["current"]["extent"]), ["Adam", "Eva"]);

    let (status, err) = send(&app, "POST", &format!("/sessions/{b}/views"), Some(json!({"name": "youth"}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(err["error"]["module"], "fca-lattice");
    let (status, _) = send(&app, "POST", &format!("/sessions/{b}/views"), Some(json!({"name": ""}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn mode_toggle_is_an_involution() {
    let app = router(ServiceConfig::default());
    let space = age_space(&app).await;
    let s = session(&app, space).await;
    let (_, before) = send(&app, "POST", &format!("/sessions/{s}/meet"), Some(json!({"elements": ["young"]}))).await;
    let (_, flipped) = send(&app, "POST", &format!("/sessions/{s}/mode"), None).await;
    assert_eq!(flipped["mode"], "intentional");
    // intentional similarity counts shared attributes of the join
    assert_eq!(row(&flipped, "attribute", "minor")["similarity"], 2);
    let (_, back) = send(&app, "POST", &format!("/sessions/{s}/mode"), None).await;
    assert_eq!(back, before);
    let (_, set) = send(&app, "POST", &format!("/sessions/{s}/mode"), Some(json!({"mode": "extensional"}))).await;
    assert_eq!(set, before);
}

#[tokio::test]
async fn errors_carry_their_module() {
    let app = router(ServiceConfig::default());
    let (status, err) =
        send(&app, "POST", "/spaces", Some(documents("people-attrs-swapped.ckml.xml", &fixture("people.csv")))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"]["module"], "scales");
    assert!(err["error"]["message"].as_str().unwrap().contains("young ⊆ working"), "{err}");

    let (status, err) =
        send(&app, "POST", "/spaces", Some(documents("people-attrs.ckml.xml", "Person,age\nAdam,x\n"))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"]["module"], "markup-io");

    let space = age_space(&app).await;
    let s = session(&app, space).await;
    let (status, err) =
        send(&app, "POST", &format!("/sessions/{s}/meet"), Some(json!({"elements": ["ancient"]}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"]["module"], "fca-lattice");
    let (status, _) = send(&app, "GET", "/sessions/999/state", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = send(&app, "POST", "/spaces/999/sessions", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = send(&app, "POST", &format!("/sessions/{s}/meet"), Some(json!({"nothing": 1}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn empty_dataset_space() {
    let app = router(ServiceConfig::default());
    let (status, body) = send(&app, "POST", "/spaces", Some(documents("people-attrs.ckml.xml", "Person,age\n"))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["concepts"], 1);
    let (_, lattice) = send(&app, "GET", &format!("/spaces/{}/lattice", body["spaceId"]), None).await;
    assert!(lattice["concepts"][0]["extent"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn multipart_upload() {
    let app = router(ServiceConfig::default());
    let boundary = "XyZ";
    let mut body = String::new();
    for (name, text) in [
        ("ontology", fixture("person.ckml.xml")),
        ("collection", fixture("people-attrs.ckml.xml")),
        ("dataset", fixture("people.csv")),
    ] {
        body.push_str(&format!("--{boundary}\r\nContent-Disposition: form-data; name=\"{name}\"\r\n\r\n{text}\r\n"));
    }
    body.push_str(&format!("--{boundary}--\r\n"));
    let req = Request::builder()
        .method("POST")
        .uri("/spaces")
        .header(header::CONTENT_TYPE, format!("multipart/form-data; boundary={boundary}"))
        .body(Body::from(body))
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::CREATED);
}

#[tokio::test]
async fn idle_sessions_expire() {
    let app = router(ServiceConfig { session_ttl: Duration::from_millis(20) });
    let space = age_space(&app).await;
    let s = session(&app, space).await;
    let (status, _) = send(&app, "GET", &format!("/sessions/{s}/state"), None).await;
    assert_eq!(status, StatusCode::OK);
    tokio::time::sleep(Duration::from_millis(60)).await;
    let (status, _) = send(&app, "GET", &format!("/sessions/{s}/state"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn replaying_a_log_reproduces_states() {
    let log: Vec<(&str, Value)> = vec![
        ("meet", json!({"elements": ["working"]})),
        ("views", json!({"name": "workers"})),
        ("mode", Value::Null),
        ("join", json!({"elements": ["Eva", "Chris"]})),
        ("meet", json!({"elements": ["view:workers", "young"]})),
    ];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let app = router(ServiceConfig::default());
        let space = age_space(&app).await;
        let s = session(&app, space).await;
        let mut states = Vec::new();
        for (op, body) in &log {
            let body = if body.is_null() { None } else { Some(body.clone()) };
            send(&app, "POST", &format!("/sessions/{s}/{op}"), body).await;
            states.push(send(&app, "GET", &format!("/sessions/{s}/state"), None).await.1.to_string());
        }
        runs.push(states);
    }
    assert_eq!(runs[0], runs[1]);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn first_writer_wins_on_view_names() {
    let app = router(ServiceConfig::default());
    let space = age_space(&app).await;
    let mut sessions = Vec::new();
    for _ in 0..8 {
        sessions.push(session(&app, space).await);
    }
    let tasks: Vec<_> = sessions
        .into_iter()
        .map(|s| {
            let app = app.clone();
            tokio::spawn(async move {
                send(
                    &app,
                    "POST",
                    &format!("/sessions/{s}/views"),
                    Some(json!({"name": "mine", "owner": s.to_string()})),
                )
                .await
                .0
            })
        })
        .collect();
    let mut created = 0;
    for t in tasks {
        match t.await.unwrap() {
            StatusCode::CREATED => created += 1,
            other => assert_eq!(other, StatusCode::CONFLICT),
        }
    }
    assert_eq!(created, 1);
}
