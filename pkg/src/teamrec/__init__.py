"""teamrec: team-formation recommendations for funding calls.

Pipeline: ingest call/roster/award corpora, normalize skills, score
researcher-call relevance on a 0-100 scale (fuzzy token overlap or tf-idf
cosine), greedily assemble teams under size/budget/unique-skill constraints,
and drive an accept/decline confirmation workflow over HTTP.
"""

from .evaluation import (
    EvalReport,
    FeedbackEvent,
    FeedbackSummary,
    award_match_lists,
    feedback_summary,
    hit_rate_at_k,
)
from .ingestion import (
    AwardRecord,
    CallRecord,
    ExtractionStats,
    MissingAwardNumber,
    MissingSynopsis,
    ResearcherProfile,
    RosterFunnel,
    extract_budget,
    extract_deadlines,
    ingestion_report,
    load_call_corpus,
    load_roster,
    parse_award_corpus,
    parse_award_record,
    parse_call_corpus,
    parse_call_record,
    parse_researcher_roster,
)
from .matching import (
    CorpusVectorModel,
    MatchList,
    MatchScore,
    STRATEGY_FUZZY,
    STRATEGY_VECTOR,
    build_corpus_model,
    fuzzy_match,
    import_embeddings,
    top_k_calls,
    vector_match,
)
from .service import CorpusPaths, create_app
from .skills import Skill, SkillSet, build_skill_set, normalize_skill, normalize_text
from .store import Store, StoreSnapshot, IntegrityViolation
from .taxonomy import Taxonomy, load_taxonomy, map_text, sample_taxonomy
from .teams import (
    AddMember,
    ConstraintReport,
    RemoveMember,
    SwapMember,
    TeamRecommendation,
    TeamingConfig,
    allocate_budget,
    build_team,
    check_constraints,
    explain_change,
    recommend_for_call,
    recommend_for_user,
    team_size_cap,
)
from .workflow import TeamWorkflow, WorkflowEvent, WorkflowState

__version__ = "0.1.0"

__all__ = [
    "AddMember",
    "AwardRecord",
    "CallRecord",
    "ConstraintReport",
    "CorpusPaths",
    "CorpusVectorModel",
    "EvalReport",
    "ExtractionStats",
    "FeedbackEvent",
    "FeedbackSummary",
    "IntegrityViolation",
    "MatchList",
    "MatchScore",
    "MissingAwardNumber",
    "MissingSynopsis",
    "RemoveMember",
    "ResearcherProfile",
    "RosterFunnel",
    "STRATEGY_FUZZY",
    "STRATEGY_VECTOR",
    "Skill",
    "SkillSet",
    "Store",
    "StoreSnapshot",
    "SwapMember",
    "Taxonomy",
    "TeamRecommendation",
    "TeamWorkflow",
    "TeamingConfig",
    "WorkflowEvent",
    "WorkflowState",
    "allocate_budget",
    "award_match_lists",
    "build_corpus_model",
    "build_skill_set",
    "build_team",
    "check_constraints",
    "create_app",
    "explain_change",
    "extract_budget",
    "extract_deadlines",
    "feedback_summary",
    "fuzzy_match",
    "hit_rate_at_k",
    "import_embeddings",
    "ingestion_report",
    "load_call_corpus",
    "load_roster",
    "load_taxonomy",
    "map_text",
    "normalize_skill",
    "normalize_text",
    "parse_award_corpus",
    "parse_award_record",
    "parse_call_corpus",
    "parse_call_record",
    "parse_researcher_roster",
    "recommend_for_call",
    "recommend_for_user",
    "sample_taxonomy",
    "team_size_cap",
    "top_k_calls",
    "vector_match",
]
