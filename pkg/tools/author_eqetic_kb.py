"""Regenerate the canonical shipped knowledge base from the draft below.

Run from the repository root:  python3 tools/author_eqetic_kb.py
Writes kb/eqetic-sufficient-didactic.ekb and the embedded package copy.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from inqshell import dsl, model  # noqa: E402

DRAFT = '''
kb "EXSeQETIC didactic-pedagogical (sufficient)" version "1.0"

# Goal variables: one per implementation-rule group.
var course-planning: univalued (satisfied)
var learning-objectives: univalued (satisfied)
var content-organization: univalued (satisfied)
var content-accuracy: univalued (satisfied)
var content-maintenance: univalued (satisfied)
var media-adequacy: univalued (satisfied)
var activity-design: univalued (satisfied)
var assessment-alignment: univalued (satisfied)
var feedback-practice: univalued (satisfied)
var learner-interaction: univalued (satisfied)
var accessibility: univalued (satisfied)
var language-clarity: univalued (satisfied)
var tutor-preparation: univalued (satisfied)
var learner-guidance: univalued (satisfied)
var improvement-cycle: univalued (satisfied)
var navigation-quality: univalued (satisfied)

# Derived evidence variables.
var planning-evidence: univalued (strong)
var review-discipline: univalued (strong)

# Askable variables.
var objectives-documented: univalued (yes, no)
var objectives-measurable: univalued (yes, no)
var syllabus-published: univalued (yes, no)
var prerequisites-stated: univalued (yes, no)
var content-expert-review: univalued (yes, no)
var review-frequency: univalued (each-offering, yearly, rarely, never)
var errata-process: univalued (yes, no)
var media-types: multivalued (text, video, audio, interactive)
var activity-variety: univalued (high, medium, low)
var assessment-mapping: univalued (full, partial, none)
var feedback-turnaround: univalued (within-two-days, within-week, longer)
var discussion-forum: univalued (yes, no)
var accessibility-conformance: univalued (full, partial, none)
var plain-language-check: univalued (yes, no)
var tutor-training: univalued (complete, partial, none)
var welcome-guide: univalued (yes, no)
var study-roadmap: univalued (yes, no)
var improvement-meetings: univalued (regular, occasional, never)
var feedback-channels: multivalued (surveys, interviews, analytics)
var navigation-consistent: univalued (yes, no)

# Derived evidence rules.
rule P1 (didactic-pedagogical, sufficient):
  if objectives-documented is yes and syllabus-published is yes
  then planning-evidence is strong cf 0.95
  desc "Planning practice: documented objectives backed by a published syllabus."
rule P2 (didactic-pedagogical, sufficient):
  if objectives-documented is yes and study-roadmap is yes
  then planning-evidence is strong cf 0.85
  desc "Planning practice: documented objectives with a learner study roadmap."
rule V1 (didactic-pedagogical, sufficient):
  if content-expert-review is yes and review-frequency is-not never
  then review-discipline is strong cf 0.95
  desc "Maintenance practice: expert review on a recurring schedule."
rule V2 (didactic-pedagogical, sufficient):
  if errata-process is yes and review-frequency is each-offering
  then review-discipline is strong cf 0.9
  desc "Maintenance practice: errata handling with per-offering review."

# Group 1: course planning.
rule R01 (didactic-pedagogical, sufficient):
  if planning-evidence is strong and prerequisites-stated is yes
  then course-planning is satisfied cf 0.9
  desc "Course planning: planning evidence plus stated prerequisites."
rule R02 (didactic-pedagogical, sufficient):
  if syllabus-published is yes and prerequisites-stated is yes
  then course-planning is satisfied cf 0.75
  desc "Course planning: published syllabus with stated prerequisites."
rule R03 (didactic-pedagogical, sufficient):
  if planning-evidence is strong
  then course-planning is satisfied cf 0.6
  desc "Course planning: planning evidence alone is weaker support."

# Group 2: learning objectives.
rule R04 (didactic-pedagogical, sufficient):
  if objectives-documented is yes and objectives-measurable is yes
  then learning-objectives is satisfied cf 0.95
  desc "Objectives practice: documented and measurable objectives."
rule R05 (didactic-pedagogical, sufficient):
  if objectives-measurable is yes and syllabus-published is yes
  then learning-objectives is satisfied cf 0.7
  desc "Objectives practice: measurable objectives surfaced in the syllabus."

# Group 3: content organization.
rule R06 (didactic-pedagogical, sufficient):
  if study-roadmap is yes and navigation-consistent is yes
  then content-organization is satisfied cf 0.9
  desc "Organization practice: roadmap plus consistent navigation."
rule R07 (didactic-pedagogical, sufficient):
  if syllabus-published is yes and study-roadmap is yes
  then content-organization is satisfied cf 0.7
  desc "Organization practice: syllabus and roadmap agree on structure."
rule R08 (didactic-pedagogical, sufficient):
  if planning-evidence is strong and navigation-consistent is yes
  then content-organization is satisfied cf 0.8
  desc "Organization practice: planning evidence with consistent navigation."

# Group 4: content accuracy.
rule R09 (didactic-pedagogical, sufficient):
  if content-expert-review is yes
  then content-accuracy is satisfied cf 0.8
  desc "Accuracy practice: subject-matter expert review."
rule R10 (didactic-pedagogical, sufficient):
  if review-discipline is strong
  then content-accuracy is satisfied cf 0.85
  desc "Accuracy practice: disciplined review process."
rule R11 (didactic-pedagogical, sufficient):
  if errata-process is yes and content-expert-review is yes
  then content-accuracy is satisfied cf 0.9
  desc "Accuracy practice: expert review plus an errata channel."

# Group 5: content maintenance.
rule R12 (didactic-pedagogical, sufficient):
  if review-frequency is each-offering
  then content-maintenance is satisfied cf 0.95
  desc "Maintenance practice: content refreshed every offering."
rule R13 (didactic-pedagogical, sufficient):
  if review-frequency is yearly and errata-process is yes
  then content-maintenance is satisfied cf 0.85
  desc "Maintenance practice: yearly review with errata handling."
rule R14 (didactic-pedagogical, sufficient):
  if review-discipline is strong
  then content-maintenance is satisfied cf 0.7
  desc "Maintenance practice: general review discipline."

# Group 6: media adequacy.
rule R15 (didactic-pedagogical, sufficient):
  if media-types is text and media-types is video
  then media-adequacy is satisfied cf 0.85
  desc "Media practice: text complemented by video."
rule R16 (didactic-pedagogical, sufficient):
  if media-types is interactive
  then media-adequacy is satisfied cf 0.75
  desc "Media practice: interactive material present."
rule R17 (didactic-pedagogical, sufficient):
  if media-types is text and media-types is audio
  then media-adequacy is satisfied cf 0.7
  desc "Media practice: text complemented by audio."

# Group 7: activity design.
rule R18 (didactic-pedagogical, sufficient):
  if activity-variety is high
  then activity-design is satisfied cf 0.9
  desc "Activity practice: high variety of learning activities."
rule R19 (didactic-pedagogical, sufficient):
  if activity-variety is medium and media-types is interactive
  then activity-design is satisfied cf 0.7
  desc "Activity practice: medium variety lifted by interactive media."

# Group 8: assessment alignment.
rule R20 (didactic-pedagogical, sufficient):
  if assessment-mapping is full
  then assessment-alignment is satisfied cf 0.95
  desc "Assessment practice: every assessment mapped to an objective."
rule R21 (didactic-pedagogical, sufficient):
  if assessment-mapping is partial and objectives-measurable is yes
  then assessment-alignment is satisfied cf 0.6
  desc "Assessment practice: partial mapping over measurable objectives."
rule R22 (didactic-pedagogical, sufficient):
  if assessment-mapping is full and objectives-measurable is yes
  then assessment-alignment is satisfied cf 0.9
  desc "Assessment practice: full mapping over measurable objectives."

# Group 9: feedback practice.
rule R23 (didactic-pedagogical, sufficient):
  if feedback-turnaround is within-two-days
  then feedback-practice is satisfied cf 0.95
  desc "Feedback practice: answers within two days."
rule R24 (didactic-pedagogical, sufficient):
  if feedback-turnaround is within-week and discussion-forum is yes
  then feedback-practice is satisfied cf 0.7
  desc "Feedback practice: weekly turnaround softened by a forum."
rule R25 (didactic-pedagogical, sufficient):
  if discussion-forum is yes and feedback-turnaround is-not longer
  then feedback-practice is satisfied cf 0.8
  desc "Feedback practice: forum available and turnaround not slow."

# Group 10: learner interaction.
rule R26 (didactic-pedagogical, sufficient):
  if discussion-forum is yes
  then learner-interaction is satisfied cf 0.85
  desc "Interaction practice: a discussion forum exists."
rule R27 (didactic-pedagogical, sufficient):
  if discussion-forum is yes and feedback-turnaround is within-two-days
  then learner-interaction is satisfied cf 0.9
  desc "Interaction practice: active forum with fast responses."

# Group 11: accessibility.
rule R28 (didactic-pedagogical, sufficient):
  if accessibility-conformance is full
  then accessibility is satisfied cf 0.95
  desc "Accessibility practice: full conformance with the guidelines."
rule R29 (didactic-pedagogical, sufficient):
  if accessibility-conformance is partial and media-types is text
  then accessibility is satisfied cf 0.6
  desc "Accessibility practice: partial conformance with text fallback."
rule R30 (didactic-pedagogical, sufficient):
  if accessibility-conformance is full and navigation-consistent is yes
  then accessibility is satisfied cf 0.9
  desc "Accessibility practice: conformance plus consistent navigation."

# Group 12: language clarity.
rule R31 (didactic-pedagogical, sufficient):
  if plain-language-check is yes
  then language-clarity is satisfied cf 0.85
  desc "Language practice: plain-language review applied."
rule R32 (didactic-pedagogical, sufficient):
  if plain-language-check is yes and content-expert-review is yes
  then language-clarity is satisfied cf 0.9
  desc "Language practice: plain language verified alongside expert review."

# Group 13: tutor preparation.
rule R33 (didactic-pedagogical, sufficient):
  if tutor-training is complete
  then tutor-preparation is satisfied cf 0.95
  desc "Tutoring practice: complete tutor training."
rule R34 (didactic-pedagogical, sufficient):
  if tutor-training is partial and welcome-guide is yes
  then tutor-preparation is satisfied cf 0.6
  desc "Tutoring practice: partial training backed by a welcome guide."
rule R35 (didactic-pedagogical, sufficient):
  if tutor-training is complete and discussion-forum is yes
  then tutor-preparation is satisfied cf 0.85
  desc "Tutoring practice: trained tutors active in the forum."

# Group 14: learner guidance.
rule R36 (didactic-pedagogical, sufficient):
  if welcome-guide is yes and study-roadmap is yes
  then learner-guidance is satisfied cf 0.9
  desc "Guidance practice: welcome guide plus study roadmap."
rule R37 (didactic-pedagogical, sufficient):
  if welcome-guide is yes
  then learner-guidance is satisfied cf 0.6
  desc "Guidance practice: welcome guide alone."
rule R38 (didactic-pedagogical, sufficient):
  if study-roadmap is yes and navigation-consistent is yes
  then learner-guidance is satisfied cf 0.75
  desc "Guidance practice: roadmap with consistent navigation."

# Group 15: improvement cycle.
rule R39 (didactic-pedagogical, sufficient):
  if improvement-meetings is regular and feedback-channels is surveys
  then improvement-cycle is satisfied cf 0.9
  desc "Evaluation practice: regular meetings fed by surveys."
rule R40 (didactic-pedagogical, sufficient):
  if improvement-meetings is regular and feedback-channels is analytics
  then improvement-cycle is satisfied cf 0.85
  desc "Evaluation practice: regular meetings fed by analytics."
rule R41 (didactic-pedagogical, sufficient):
  if improvement-meetings is occasional and feedback-channels is interviews
  then improvement-cycle is satisfied cf 0.6
  desc "Evaluation practice: occasional meetings fed by interviews."

# Group 16: navigation quality.
rule R42 (didactic-pedagogical, sufficient):
  if navigation-consistent is yes
  then navigation-quality is satisfied cf 0.8
  desc "Navigation practice: consistent navigation structure."
rule R43 (didactic-pedagogical, sufficient):
  if navigation-consistent is yes and accessibility-conformance is full
  then navigation-quality is satisfied cf 0.9
  desc "Navigation practice: consistent and fully accessible navigation."

prompt objectives-documented: choice "Are the learning objectives of the course documented?" cf-input help "Look for a written statement of what learners should achieve."
prompt objectives-measurable: choice "Are the learning objectives stated in a measurable way?" cf-input
prompt syllabus-published: choice "Is a course syllabus published to learners before the course starts?" cf-input
prompt prerequisites-stated: choice "Are the course prerequisites stated explicitly?" cf-input
prompt content-expert-review: choice "Is the content reviewed by a subject-matter expert?" cf-input
prompt review-frequency: forcedchoice "How often is the course content reviewed?" cf-input help "Pick the closest match to your current practice."
prompt errata-process: choice "Is there a working process for reporting and fixing content errors?" cf-input
prompt media-types: multichoice "Which media types does the course material use?" cf-input help "Select every media type that appears in the material."
prompt activity-variety: forcedchoice "How varied are the learning activities?" cf-input
prompt assessment-mapping: forcedchoice "How completely are assessments mapped to the learning objectives?" cf-input
prompt feedback-turnaround: forcedchoice "How quickly do learners receive feedback on their questions?" cf-input
prompt discussion-forum: choice "Is a discussion forum available to learners?" cf-input
prompt accessibility-conformance: forcedchoice "How fully does the material conform to accessibility guidelines?" cf-input
prompt plain-language-check: choice "Is the material checked for plain, audience-appropriate language?" cf-input
prompt tutor-training: forcedchoice "How complete is the didactic training of the tutors?" cf-input
prompt welcome-guide: choice "Do learners receive a welcome guide when they enroll?" cf-input
prompt study-roadmap: choice "Is a study roadmap available that orders the content?" cf-input
prompt improvement-meetings: forcedchoice "How regularly does the team meet to improve the course?" cf-input
prompt feedback-channels: allchoice "State how certain you are that each feedback channel is in active use." cf-input help "Give a certainty for every channel; use 0 for channels you do not use."
prompt navigation-consistent: choice "Is the navigation consistent across the whole course?" cf-input

goal course-planning
goal learning-objectives
goal content-organization
goal content-accuracy
goal content-maintenance
goal media-adequacy
goal activity-design
goal assessment-alignment
goal feedback-practice
goal learner-interaction
goal accessibility
goal language-clarity
goal tutor-preparation
goal learner-guidance
goal improvement-cycle
goal navigation-quality
'''


def main() -> None:
    result = dsl.parse(DRAFT, filename="draft")
    if not result.ok:
        for d in result.diagnostics:
            print(d)
        raise SystemExit(1)
    kb = result.kb
    diagnostics = model.validate(kb) + dsl.lint(kb)
    for d in diagnostics:
        print(d)
    counts = (len(kb.variables), len(kb.rules), len(kb.goals))
    print("variables/rules/goals:", counts)
    assert counts == (38, 47, 16), counts
    assert not diagnostics, "expected a clean validate+lint"
    canonical = dsl.serialize(kb)
    reparsed = dsl.parse(canonical)
    assert reparsed.ok and reparsed.kb == kb
    root = pathlib.Path(__file__).resolve().parents[1]
    for target in (
        root / "kb" / "eqetic-sufficient-didactic.ekb",
        root / "src" / "inqshell" / "data" / "eqetic-sufficient-didactic.ekb",
    ):
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(canonical, encoding="utf-8")
        print("wrote", target)


if __name__ == "__main__":
    main()
