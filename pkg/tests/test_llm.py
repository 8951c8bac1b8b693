from __future__ import annotations

import json
from pathlib import Path

import pytest

from kgverify.errors import ContextOverflow, FixtureMissing, ProviderUnavailable
from kgverify.llm import (
    LlmGateway,
    LlmParams,
    ReplayProvider,
    ScriptedProvider,
    ResponseLog,
    completion_fingerprint,
    default_params,
    extract_justification,
    parse_nli_label,
    parse_option,
    write_response_log,
)
from kgverify.model import NliLabel, VerdictKind
from kgverify.prompting import OPTION_TEXTS

CORPUS = Path(__file__).parent / "fixtures" / "parser_corpus.jsonl"

FIG2 = (
    "The correct answer is: a) The RDF statement can be directly verified from the snippet. "
    "The snippet contains direct proof. The snippet explicitly mentions \"Concordia Prize\" "
    "in the list of awards received by Václav Havel, which directly verifies the RDF "
    "statement."
)
FIG4 = (
    "The correct answer is: a) The RDF statement can be directly verified from the snippet. "
    "The snippet contains direct proof. The snippet explicitly mentions \"Previous winners "
    "of the award... include former Czech president, Václav Havel\", which directly "
    "verifies the RDF statement [\"Václav Havel\" - \"award received\" - \"Gottlieb "
    "Duttweiler Prize\"]."
)
FIG7 = (
    "Based on the given texts, I would say that the correct label is:c) contradiction. The "
    "reason is that the premise states that the man is waiting for a green light, but the "
    "hypothesis states that the man is waiting at a red light. This is a clear "
    "contradiction, as the man cannot be waiting for a green light if he is already at a "
    "red light."
)
FIG8 = (
    "The correct answer is c) contradiction. The premise states \"A woman is sitting in a "
    "chair\", while the hypothesis states \"a girl is sitting\". The contradiction lies in "
    "the fact that \"woman\" and \"girl\" are not the same, so the hypothesis mentions "
    "something that would not be possible in the premise."
)
FIG9 = (
    "Based on the given texts, I would choose option c) contradiction. The premise states "
    "that the man \"chokes\" the woman, but it's in the context of an overly dramatic "
    "couple posing for a picture, and the quotation marks around \"chokes\" suggest that "
    "it's not meant to be taken literally. In contrast, the hypothesis states \"A man "
    "chokes a woman\" without any indication that it's not meant to be taken literally. "
    "Therefore, the hypothesis contradicts the premise because it implies a level of "
    "violence or aggression that is not present in the original context."
)


class TestDefaultParams:
    def test_pinned_values(self):
        params = default_params()
        assert params.model == "meta/meta-llama-3-70b-instruct"
        assert params.seed == 42
        assert params.top_p == 0.9
        assert params.temperature == 0.1
        assert params.max_new_tokens == 500
        assert params.min_new_tokens == -1
        assert params.system_prompt == (
            "You are a helpful assistant. Work only with the text given to you."
        )

    def test_constant_across_calls(self):
        assert default_params() == default_params()

    def test_validation(self):
        with pytest.raises(ValueError):
            LlmParams(top_p=0.0)
        with pytest.raises(ValueError):
            LlmParams(temperature=-0.5)
        with pytest.raises(ValueError):
            LlmParams(max_new_tokens=0)


class TestFingerprint:
    def test_deterministic(self):
        params = default_params()
        assert completion_fingerprint(params, "hello") == completion_fingerprint(params, "hello")

    def test_sensitive_to_params_and_prompt(self):
        params = default_params()
        assert completion_fingerprint(params, "a") != completion_fingerprint(params, "b")
        other = LlmParams(model="gpt-4-1106-preview")
        assert completion_fingerprint(params, "a") != completion_fingerprint(other, "a")


class TestProviders:
    def test_scripted_in_order(self):
        provider = ScriptedProvider(["one", "two"])
        params = default_params()
        assert provider.complete(params, "p1") == "one"
        assert provider.complete(params, "p2") == "two"
        assert provider.calls == 2

    def test_scripted_exhaustion(self):
        provider = ScriptedProvider([])
        with pytest.raises(FixtureMissing):
            provider.complete(default_params(), "p")

    def test_scripted_from_jsonl(self, tmp_path):
        script = tmp_path / "script.jsonl"
        script.write_text(
            '{"raw_text": "first"}\n\n{"raw_text": "second"}\n', encoding="utf-8"
        )
        provider = ScriptedProvider.from_jsonl(script)
        params = default_params()
        assert provider.complete(params, "x") == "first"
        assert provider.complete(params, "y") == "second"

    def test_replay_round_trip(self, tmp_path):
        params = default_params()
        log_path = tmp_path / "responses.jsonl"
        write_response_log(log_path, [(params, "prompt one", "answer one")])
        provider = ReplayProvider(log_path)
        assert len(provider) == 1
        assert provider.complete(params, "prompt one") == "answer one"

    def test_replay_missing_names_fingerprint(self, tmp_path):
        log_path = tmp_path / "responses.jsonl"
        write_response_log(log_path, [])
        provider = ReplayProvider(log_path)
        params = default_params()
        fingerprint = completion_fingerprint(params, "absent")
        with pytest.raises(FixtureMissing, match=fingerprint):
            provider.complete(params, "absent")


class TestGateway:
    def test_returns_scripted_text(self):
        gateway = LlmGateway(ScriptedProvider(["The correct answer is: a)"]))
        response = gateway.complete("a prompt")
        assert response.raw_text == "The correct answer is: a)"
        assert response.provider == "scripted"
        assert response.request_fingerprint == completion_fingerprint(
            gateway.params, "a prompt"
        )

    def test_empty_prompt_rejected(self):
        gateway = LlmGateway(ScriptedProvider(["x"]))
        with pytest.raises(ValueError):
            gateway.complete("")

    def test_context_overflow(self):
        gateway = LlmGateway(ScriptedProvider(["x"]), context_tokens=10)
        # budget is 40 chars; the system prompt alone exceeds it
        with pytest.raises(ContextOverflow):
            gateway.complete("p" * 50)

    def test_retries_with_backoff_then_raises(self):
        class Flaky:
            name = "flaky"

            def __init__(self):
                self.calls = 0

            def complete(self, params, prompt):
                self.calls += 1
                raise ProviderUnavailable("boom")

        sleeps = []
        flaky = Flaky()
        gateway = LlmGateway(flaky, max_attempts=3, sleeper=sleeps.append)
        with pytest.raises(ProviderUnavailable):
            gateway.complete("p")
        assert flaky.calls == 3
        assert sleeps == [1.0, 2.0]

    def test_recovers_after_transient_failure(self):
        class FlakyOnce:
            name = "flaky-once"

            def __init__(self):
                self.calls = 0

            def complete(self, params, prompt):
                self.calls += 1
                if self.calls == 1:
                    raise ProviderUnavailable("first try fails")
                return "recovered"

        gateway = LlmGateway(FlakyOnce(), sleeper=lambda _: None)
        assert gateway.complete("p").raw_text == "recovered"

    def test_appends_to_response_log(self, tmp_path):
        log = ResponseLog(tmp_path / "log.jsonl")
        gateway = LlmGateway(ScriptedProvider(["answer"]), response_log=log)
        response = gateway.complete("prompt")
        record = json.loads((tmp_path / "log.jsonl").read_text().splitlines()[0])
        assert record["fingerprint"] == response.request_fingerprint
        assert record["raw_text"] == "answer"
        # a log written this way is replayable
        provider = ReplayProvider(tmp_path / "log.jsonl")
        assert provider.complete(gateway.params, "prompt") == "answer"


class TestParseOption:
    def test_figure_texts(self):
        assert parse_option(FIG2).kind is VerdictKind.DIRECT_PROOF
        assert parse_option(FIG4).kind is VerdictKind.DIRECT_PROOF

    def test_colon_without_space(self):
        assert parse_option("The correct answer is:b) partial hints.").kind is (
            VerdictKind.INDICATION
        )

    def test_no_option_token(self):
        verdict = parse_option("I cannot determine anything.")
        assert verdict.kind is VerdictKind.UNPARSEABLE
        assert verdict.raw_response == "I cannot determine anything."

    def test_conflicting_declarations_are_unparseable(self):
        text = "a) seems right, but the correct answer is c) after all."
        assert parse_option(text).kind is VerdictKind.UNPARSEABLE

    @pytest.mark.parametrize(
        "text",
        [
            "A man received a prize in 1990 at a ceremony.",
            "The snippet mentions a) nothing relevant here",  # no declaration context
            "Considering all angles, nothing can be concluded.",
            "The award ceremony was a grand occasion for all attendees.",
        ],
    )
    def test_incidental_letters_never_confirm(self, text):
        # guards the no-false-confirmation rule for direct proof
        assert parse_option(text).kind is not VerdictKind.DIRECT_PROOF


class TestParseNli:
    def test_figure_texts(self):
        assert parse_nli_label(FIG7) is NliLabel.CONTRADICTION
        assert parse_nli_label(FIG8) is NliLabel.CONTRADICTION
        assert parse_nli_label(FIG9) is NliLabel.CONTRADICTION

    def test_letter_beats_word(self):
        assert parse_nli_label("The correct answer is b) contradiction.") is NliLabel.NEUTRAL

    def test_word_only(self):
        assert parse_nli_label("This is an entailment, plainly.") is NliLabel.ENTAILMENT

    def test_empty_is_unparseable(self):
        assert parse_nli_label("") is NliLabel.UNPARSEABLE

    def test_conflicting_words_unparseable(self):
        text = "It might be an entailment or a contradiction."
        assert parse_nli_label(text) is NliLabel.UNPARSEABLE


class TestExtractJustification:
    def test_figure_output(self):
        assert extract_justification(FIG4).startswith(
            'The snippet explicitly mentions "Previous winners'
        )

    def test_bare_option_empty(self):
        assert extract_justification("a)") == ""

    def test_no_declaration_keeps_whole_text(self):
        text = "The snippet talks about something else entirely."
        assert extract_justification(text) == text

    def test_reasoning_before_declaration_kept_whole(self):
        text = ("The snippet names the recipient. It also names the prize. "
                "Therefore the correct answer is a).")
        assert extract_justification(text) == text

    def test_empty_input(self):
        assert extract_justification("") == ""

    def test_strips_echoed_option_wording(self):
        raw = "The correct answer is: b) " + OPTION_TEXTS["b"] + " There are hints only."
        assert extract_justification(raw) == "There are hints only."


class TestParserCorpus:
    def load(self):
        cases = [
            json.loads(line)
            for line in CORPUS.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        assert len(cases) >= 100
        return cases

    def test_accuracy_at_least_99_percent(self):
        cases = self.load()
        option_map = {
            "a": VerdictKind.DIRECT_PROOF,
            "b": VerdictKind.INDICATION,
            "c": VerdictKind.NO_SUPPORT,
            "unparseable": VerdictKind.UNPARSEABLE,
        }
        correct = 0
        for case in cases:
            if case["kind"] == "option":
                got = parse_option(case["text"]).kind is option_map[case["expected"]]
            else:
                got = parse_nli_label(case["text"]) is NliLabel(case["expected"])
            correct += got
        assert correct / len(cases) >= 0.99
