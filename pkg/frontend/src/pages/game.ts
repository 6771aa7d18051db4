/** Trivia game: answer questions, watch XP land, spend it on a pack. */

import type { AppContext } from "../app.js";
import { ApiError } from "../api.js";
import { el } from "../format.js";

export async function renderGame(ctx: AppContext, container: HTMLElement): Promise<void> {
  const doc = ctx.doc;
  if (!ctx.account) {
    container.append(
      el(doc, "div", "login-required", "Connect your account (top right) to play."),
    );
    return;
  }

  container.append(el(doc, "h2", undefined, "Trigonometry trivia"));
  const xpNote = el(
    doc,
    "p",
    "game-note",
    "Correct answers earn XP (once per question). Spend 100 XP on a card pack below.",
  );
  container.append(xpNote);

  const questionPanel = el(doc, "div", "question-panel");
  questionPanel.id = "question-panel";
  const feedback = el(doc, "div", "answer-feedback");
  feedback.id = "answer-feedback";
  container.append(questionPanel, feedback);

  const packButton = el(doc, "button", "primary", "Spend 100 XP on a pack");
  packButton.id = "game-buy-pack";
  packButton.addEventListener("click", () => {
    void ctx.mutate(() => ctx.api.buyPack("xp")).then((result) => {
      if (result) {
        ctx.status(`XP pack opened: ${result.tokens.map((t) => t.display_name).join(", ")}`);
        void ctx.navigate("mycards");
      }
    });
  });
  container.append(packButton);

  async function showQuestion(): Promise<void> {
    questionPanel.textContent = "";
    let question;
    try {
      question = await ctx.api.nextQuestion();
    } catch (error) {
      if (error instanceof ApiError && error.code === "EmptyBank") {
        questionPanel.append(
          el(doc, "div", "empty-state", "No trivia questions are loaded on this server."),
        );
        return;
      }
      throw error;
    }
    questionPanel.append(
      el(doc, "div", "question-difficulty", `${question.difficulty} · ${question.xp_reward} XP`),
      el(doc, "h3", "question-prompt", question.prompt),
    );
    const choiceList = el(doc, "div", "choices");
    question.choices.forEach((choice, index) => {
      const button = el(doc, "button", "choice", choice);
      button.dataset.choiceIndex = String(index);
      button.addEventListener("click", () => {
        void ctx
          .mutate(() => ctx.api.answerQuestion(question.qid, index))
          .then((result) => {
            if (!result) return;
            if (result.correct) {
              feedback.textContent = `Correct! +${result.xp_awarded} XP (total ${result.new_xp})`;
              feedback.className = "answer-feedback ok";
            } else {
              feedback.textContent = "Not quite — your XP is unchanged. Try the next one.";
              feedback.className = "answer-feedback error";
            }
            void showQuestion();
          });
      });
      choiceList.append(button);
    });
    questionPanel.append(choiceList);
  }

  await showQuestion();
}
