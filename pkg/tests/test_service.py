import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from inqshell import eqetic, kb_hash, parse
from inqshell.cli import main
from inqshell.service import REPORT_MEDIA_TYPE, create_app

TINY = """
kb "tiny" version "1"
var climate: univalued (warm, cold)
var advice: univalued (go-outside, stay-in)
rule R1: if climate is warm then advice is go-outside cf 0.9
rule R2: if climate is cold then advice is stay-in cf 0.8
prompt climate: choice "What is the climate like?" cf-input
goal advice
"""


@pytest.fixture(scope="module")
def client():
    kb = parse(TINY).kb
    app = create_app([kb, eqetic.build()])
    with TestClient(app) as c:
        yield c


def answer_http(client, handle, variable, selections):
    return client.post(
        f"/sessions/{handle}/answer",
        json={
            "variable": variable,
            "selections": [
                {"value": v, "certainty": c} for v, c in selections
            ],
        },
    )


def drive_http(client, handle, answers):
    state = client.get(f"/sessions/{handle}/question").json()
    while not state["finished"]:
        variable = state["question"]["variable"]
        resp = answer_http(client, handle, variable, answers[variable])
        assert resp.status_code == 200, resp.text
        state = resp.json()
    return state


class TestCatalog:
    def test_lists_both_kbs(self, client):
        data = client.get("/kbs").json()
        names = {kb["name"] for kb in data["kbs"]}
        assert names == {"tiny", "EXSeQETIC didactic-pedagogical (sufficient)"}

    def test_eqetic_entry_counts_and_coverage(self, client, eqetic_kb):
        data = client.get("/kbs").json()
        entry = next(
            kb for kb in data["kbs"] if kb["name"] != "tiny"
        )
        assert (entry["variables"], entry["rules"], entry["goals"]) == (
            38, 47, 16,
        )
        assert entry["hash"] == kb_hash(eqetic_kb)
        assert len(entry["coverage"]) == 18
        cells = {
            (c["entity"], c["level"]): c["rules"] for c in entry["coverage"]
        }
        assert cells[("didactic-pedagogical", "sufficient")] == 47
        assert sum(cells.values()) == 47


class TestSessionLifecycle:
    def test_create_returns_first_question(self, client):
        resp = client.post("/sessions", json={"kb": "tiny"})
        assert resp.status_code == 201
        body = resp.json()
        assert not body["finished"]
        q = body["question"]
        assert q["variable"] == "climate"
        assert q["kind"] == "choice"
        assert q["options"] == ["warm", "cold"]
        assert q["accepts_cf"] is True

    def test_unknown_kb_404(self, client):
        assert (
            client.post("/sessions", json={"kb": "nope"}).status_code == 404
        )

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/bogus/question").status_code == 404

    def test_answer_flow_to_report(self, client):
        handle = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        resp = answer_http(client, handle, "climate", [("warm", 0.9)])
        assert resp.status_code == 200
        assert resp.json()["finished"] is True
        report = client.get(f"/sessions/{handle}/report")
        assert report.headers["content-type"].startswith(
            "text/vnd.inqshell.report"
        )
        assert "goal advice = go-outside cf 0.81" in report.text

    def test_report_media_type_constant(self):
        assert REPORT_MEDIA_TYPE == "text/vnd.inqshell.report; version=1"

    def test_wrong_variable_409(self, client):
        handle = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        resp = answer_http(client, handle, "advice", [("go-outside", None)])
        assert resp.status_code == 409

    def test_answer_after_finish_409(self, client):
        handle = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        answer_http(client, handle, "climate", [("warm", None)])
        resp = answer_http(client, handle, "climate", [("cold", None)])
        assert resp.status_code == 409

    def test_invalid_answer_422(self, client):
        handle = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        resp = answer_http(client, handle, "climate", [("tropical", None)])
        assert resp.status_code == 422

    def test_out_of_range_certainty_422(self, client):
        handle = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        resp = answer_http(client, handle, "climate", [("warm", 1.5)])
        assert resp.status_code == 422

    def test_threshold_override(self, client):
        handle = client.post(
            "/sessions", json={"kb": "tiny", "truth_threshold": 0.95}
        ).json()["session"]
        answer_http(client, handle, "climate", [("warm", None)])
        report = client.get(f"/sessions/{handle}/report?format=json").json()
        assert report["truth_threshold"] == 0.95
        assert report["goals"][0]["status"] == "no-conclusion"

    def test_sessions_are_isolated(self, client):
        h1 = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        h2 = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        answer_http(client, h1, "climate", [("warm", None)])
        q2 = client.get(f"/sessions/{h2}/question").json()
        assert not q2["finished"]
        assert q2["question"]["variable"] == "climate"

    def test_blank_certainty_submits_full(self, client):
        handle = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        answer_http(client, handle, "climate", [("warm", None)])
        transcript = client.get(f"/sessions/{handle}/transcript")
        assert transcript.status_code == 200
        assert "warm cf default" in transcript.text
        report = client.get(f"/sessions/{handle}/report?format=json").json()
        assert report["goals"][0]["certainty"] == pytest.approx(0.9)

    def test_ttl_expiry_evicts(self):
        kb = parse(TINY).kb
        app = create_app([kb], ttl=0.0)
        with TestClient(app) as c:
            handle = c.post("/sessions", json={"kb": "tiny"}).json()["session"]
            assert c.get(f"/sessions/{handle}/question").status_code == 404


class TestExplainEndpoint:
    def test_explain_lines(self, client):
        handle = client.post("/sessions", json={"kb": "tiny"}).json()["session"]
        answer_http(client, handle, "climate", [("warm", None)])
        data = client.get(f"/sessions/{handle}/explain/advice").json()
        assert data["variable"] == "advice"
        assert data["lines"][0].startswith("rule R1")


class TestCrossSurfaceEquivalence:
    def test_http_cli_and_library_reports_agree(
        self, client, eqetic_kb, repo_root, tmp_path
    ):
        from inqshell import Answer, Selection, start
        from inqshell.session import render_structured

        answers = eqetic.best_practice_answers(eqetic_kb)

        # HTTP surface
        handle = client.post(
            "/sessions", json={"kb": "EXSeQETIC didactic-pedagogical (sufficient)"}
        ).json()["session"]
        drive_http(client, handle, answers)
        http_text = client.get(f"/sessions/{handle}/report").text
        http_json = client.get(
            f"/sessions/{handle}/report?format=json"
        ).json()

        # CLI surface
        cli = CliRunner().invoke(
            main,
            [
                "batch",
                str(repo_root / "kb" / "eqetic-sufficient-didactic.ekb"),
                str(repo_root / "fixtures" / "all-practices.answers"),
                "--format",
                "structured",
            ],
        )
        assert cli.exit_code == 0

        # Library surface
        session = start(eqetic_kb)
        from inqshell import Finished

        while True:
            step = session.next()
            if isinstance(step, Finished):
                lib_report = step.report
                break
            session.answer(
                Answer(
                    step.variable,
                    tuple(
                        Selection(v, c) for v, c in answers[step.variable]
                    ),
                )
            )
        lib_text = render_structured(lib_report)

        assert http_text == lib_text
        assert cli.output == lib_text
        assert http_json["structured"] == lib_text
        for g_json, g_lib in zip(http_json["goals"], lib_report.goals):
            assert g_json["variable"] == g_lib.variable
            assert g_json["value"] == g_lib.value
            assert g_json["certainty"] == pytest.approx(
                float(g_lib.certainty)
            )
