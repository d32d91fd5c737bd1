"""HTTP contract tests over the FastAPI layer with a scripted provider.

TestClient runs background tasks synchronously after each response, so the
event-order assertions here match what a sequential real-world client sees.
"""

import json

import pytest
from fastapi.testclient import TestClient

from conftest import fenced, solution_text, write_platform_config
from promptprog import events as ev
from promptprog.config import load_config
from promptprog.core import Platform
from promptprog.service import create_app


def build_client(tmp_path, fixture_entries):
    config_path = write_platform_config(tmp_path, fixture_entries)
    platform = Platform(load_config(config_path))
    return TestClient(create_app(platform)), platform


@pytest.fixture
def solving_client(tmp_path):
    fixture = [
        {
            "problem_id": "count-negatives",
            "turn_index": 1,
            "reply_text": "Sure:\n" + fenced(solution_text("count-negatives")),
        },
        {"problem_id": "count-negatives", "turn_index": 2, "reply_text": "No code this time."},
    ]
    return build_client(tmp_path, fixture)


def start(client, problem_id="count-negatives", student="stu"):
    resp = client.post("/sessions", json={"student_id": student, "problem_id": problem_id})
    assert resp.status_code == 200
    return resp.json()["session_id"]


class TestProblemEndpoints:
    def test_listing_shape(self, solving_client):
        client, _ = solving_client
        body = client.get("/problems").json()
        assert len(body) == 9
        assert set(body[0]) == {"id", "title", "tier", "kind"}

    def test_detail_renders_specification(self, solving_client):
        client, _ = solving_client
        body = client.get("/problems/password-validation").json()
        assert body["kind"] == "multi_function"
        assert "## Function:" in body["specification"]

    def test_unknown_problem_404(self, solving_client):
        client, _ = solving_client
        resp = client.get("/problems/nope")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "UNKNOWN_PROBLEM"

    def test_no_hidden_values_in_any_response(self, solving_client, problems):
        client, _ = solving_client
        responses = [client.get("/problems").text]
        responses += [client.get(f"/problems/{pid}").text for pid in problems]
        blob = "\n".join(responses)
        from promptprog.corpus import format_example_row

        for p in problems.values():
            for f in p.functions:
                visible = {format_example_row(tc) for tc in f.visible_examples}
                for tc in f.hidden_tests:
                    row = format_example_row(tc)
                    if row not in visible:
                        assert row not in blob


class TestSessionFlow:
    def test_full_solve_flow_and_event_order(self, solving_client):
        client, platform = solving_client
        sid = start(client)
        resp = client.post(f"/sessions/{sid}/messages", json={"content": "write it"})
        body = resp.json()
        assert body["code_block_count"] == 1
        assert body["limit"] == {"used": 1, "max": 5}
        resp = client.post(f"/sessions/{sid}/messages", json={"content": "thanks"})
        assert resp.json()["code_block_count"] == 0
        run = client.post(f"/sessions/{sid}/run").json()
        assert run["all_ok"] is True and run["run_index"] == 1
        summary = client.get(f"/sessions/{sid}").json()
        assert summary["solved"] is True and summary["run_counter"] == 1
        assert [m["role"] for m in summary["messages"]] == [
            "student", "assistant", "student", "assistant",
        ]
        kinds = [r.kind for r in platform.events_snapshot()]
        assert kinds == [
            ev.SESSION_STARTED,
            ev.MESSAGE_POSTED, ev.ASSISTANT_REPLIED, ev.CODE_GENERATED, ev.SHADOW_GRADE,
            ev.MESSAGE_POSTED, ev.ASSISTANT_REPLIED,
            ev.RUN_REQUESTED, ev.RUN_RESULT, ev.PROBLEM_SOLVED,
        ]

    def test_run_with_no_code_is_409(self, tmp_path):
        client, _ = build_client(
            tmp_path,
            [{"problem_id": "count-negatives", "turn_index": 1, "reply_text": "prose"}],
        )
        sid = start(client)
        client.post(f"/sessions/{sid}/messages", json={"content": "hi"})
        resp = client.post(f"/sessions/{sid}/run")
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "NO_CODE_AVAILABLE"

    def test_limit_reached_is_409(self, tmp_path):
        fixture = [
            {"problem_id": "count-negatives", "turn_index": k, "reply_text": "ok"}
            for k in range(1, 6)
        ]
        client, _ = build_client(tmp_path, fixture)
        sid = start(client)
        for k in range(5):
            assert (
                client.post(f"/sessions/{sid}/messages", json={"content": f"m{k}"}).status_code
                == 200
            )
        resp = client.post(f"/sessions/{sid}/messages", json={"content": "m5"})
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "LIMIT_REACHED"

    def test_empty_message_is_400(self, solving_client):
        client, _ = solving_client
        sid = start(client)
        resp = client.post(f"/sessions/{sid}/messages", json={"content": "  "})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "EMPTY_MESSAGE"

    def test_provider_fixture_miss_is_502(self, tmp_path):
        client, _ = build_client(tmp_path, [])
        sid = start(client)
        resp = client.post(f"/sessions/{sid}/messages", json={"content": "hi"})
        assert resp.status_code == 502

    def test_reset_endpoint(self, solving_client):
        client, _ = solving_client
        sid = start(client)
        client.post(f"/sessions/{sid}/messages", json={"content": "one"})
        resp = client.post(f"/sessions/{sid}/reset")
        assert resp.json() == {"conversation_index": 1}
        summary = client.get(f"/sessions/{sid}").json()
        assert summary["messages"] == [] and summary["limit"]["used"] == 0

    def test_run_idempotency_header(self, solving_client):
        client, platform = solving_client
        sid = start(client)
        client.post(f"/sessions/{sid}/messages", json={"content": "write it"})
        one = client.post(f"/sessions/{sid}/run", headers={"Idempotency-Key": "abc"}).json()
        two = client.post(f"/sessions/{sid}/run", headers={"Idempotency-Key": "abc"}).json()
        assert one == two
        assert client.get(f"/sessions/{sid}").json()["run_counter"] == 1

    def test_unknown_session_404(self, solving_client):
        client, _ = solving_client
        assert client.get("/sessions/doesnotexist").status_code == 404


class TestAnalyticsEndpoints:
    def seed(self, client):
        sid = start(client, student="s1")
        client.post(f"/sessions/{sid}/messages", json={"content": "write it"})
        client.post(f"/sessions/{sid}/run")
        return sid

    def test_progression_dot(self, solving_client):
        client, _ = solving_client
        self.seed(client)
        resp = client.get("/analytics/progression/count-negatives?k=15&format=dot")
        assert resp.status_code == 200
        assert '"{}" -> "{count_negatives}"' in resp.text

    def test_progression_structured(self, solving_client):
        client, _ = solving_client
        self.seed(client)
        doc = json.loads(
            client.get("/analytics/progression/count-negatives?format=structured").text
        )
        assert doc["student_count"] == 1
        assert doc["edges"][0]["weight"] == 1

    def test_progression_unknown_problem_404(self, solving_client):
        client, _ = solving_client
        assert client.get("/analytics/progression/ghost").status_code == 404

    def test_tables_and_csv(self, solving_client):
        client, _ = solving_client
        self.seed(client)
        for name in ("lengths", "message-sizes", "selectivity", "descriptive"):
            doc = client.get(f"/analytics/{name}").json()
            assert doc["schema_version"] == 1
            csv_text = client.get(f"/analytics/{name}?format=csv").text
            assert csv_text.splitlines()[0] == "# schema_version=1"
            assert csv_text.splitlines()[1] == ",".join(doc["columns"])

    def test_lengths_custom_buckets(self, solving_client):
        client, _ = solving_client
        self.seed(client)
        doc = client.get("/analytics/lengths?buckets=1,2").json()
        labels = [r[1] for r in doc["rows"] if r[0] == "L7"]
        assert labels == ["1", "2", ">2"]


def test_healthz(solving_client):
    client, _ = solving_client
    body = client.get("/healthz").json()
    assert body["status"] == "ok" and body["problems"] == 9
