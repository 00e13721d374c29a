/** Page wiring: one editor session, one in-flight request at most.
 *
 * Everything the page shows comes from API payloads via the pure
 * renderers; this module only moves strings between DOM and model.
 */

import {
  ApiError,
  checkText,
  getExercise,
  listExercises,
  predictCheck,
  type CheckResponse,
  type ExerciseDetail,
} from "./api";
import { initPredict, setTag, toPredictions, validationMessage, LABELS, type Label, type PredictModel } from "./predict";
import { renderBanner, renderDiff, renderItems, renderMarkers, renderToast, escapeHtml } from "./render";
import { applyCheck, editDraft, markers, newSession, type EditorSession } from "./session";

const BASE = "";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const exerciseSelect = el<HTMLSelectElement>("exercise");
const statementBox = el<HTMLElement>("statement");
const editor = el<HTMLTextAreaElement>("editor");
const checkButton = el<HTMLButtonElement>("check");
const bannerBox = el<HTMLElement>("banner");
const markerBox = el<HTMLElement>("markers");
const feedbackBox = el<HTMLElement>("feedback");
const toastBox = el<HTMLElement>("toast");
const proveArea = el<HTMLElement>("prove-area");
const predictArea = el<HTMLElement>("predict-area");
const predictBox = el<HTMLElement>("predict-sentences");
const predictSubmit = el<HTMLButtonElement>("predict-submit");
const predictResult = el<HTMLElement>("predict-result");

let session: EditorSession = newSession();
let predictModel: PredictModel | null = null;
let inFlight = false;

function toast(message: string): void {
  toastBox.innerHTML = renderToast(message);
  window.setTimeout(() => {
    toastBox.innerHTML = "";
  }, 4000);
}

function render(): void {
  bannerBox.innerHTML = renderBanner(session.lastResponse);
  markerBox.innerHTML = renderMarkers(markers(session));
  feedbackBox.innerHTML = renderItems(session.lastResponse?.items ?? []);
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return error.reason;
  return "cannot reach the checking service";
}

async function runCheck(): Promise<void> {
  if (inFlight) return;
  const draft = editor.value;
  if (draft.trim() === "") {
    toast("write a proof first");
    return;
  }
  inFlight = true;
  checkButton.disabled = true;
  try {
    const response: CheckResponse = await checkText(BASE, {
      text: draft,
      verbosity: "explained",
      ...(session.exerciseId !== null ? { exerciseId: session.exerciseId } : {}),
    });
    session = applyCheck(editDraft(session, draft), draft, response);
    render();
  } catch (error) {
    toast(describeError(error));
  } finally {
    inFlight = false;
    checkButton.disabled = false;
  }
}

function renderPredictRows(model: PredictModel): void {
  const options = (picked: Label | null) =>
    ['<option value="">-</option>']
      .concat(
        LABELS.map(
          (label) =>
            `<option value="${label}"${label === picked ? " selected" : ""}>${label}</option>`,
        ),
      )
      .join("");
  predictBox.innerHTML = model.sentences
    .map(
      (sentence, i) =>
        `<li><label>${escapeHtml(sentence.text)} ` +
        `<select data-index="${i}">${options(model.tags[i] ?? null)}</select></label></li>`,
    )
    .join("");
  predictBox.querySelectorAll("select").forEach((select) => {
    select.addEventListener("change", () => {
      if (predictModel === null) return;
      const index = Number(select.getAttribute("data-index"));
      const value = select.value === "" ? null : (select.value as Label);
      predictModel = setTag(predictModel, index, value);
    });
  });
}

async function enterExercise(id: string): Promise<void> {
  session = newSession();
  predictModel = null;
  predictResult.innerHTML = "";
  if (id === "") {
    statementBox.textContent = "";
    editor.value = "";
    proveArea.hidden = false;
    predictArea.hidden = true;
    render();
    return;
  }
  let exercise: ExerciseDetail;
  try {
    exercise = await getExercise(BASE, id);
  } catch (error) {
    toast(describeError(error));
    return;
  }
  statementBox.textContent = exercise.statement;
  if (exercise.mode === "predict-feedback" && exercise.attachment !== null) {
    proveArea.hidden = true;
    predictArea.hidden = false;
    try {
      const full = await checkText(BASE, { text: exercise.statement + exercise.attachment });
      predictModel = initPredict(full["sentence-verdicts"]);
      renderPredictRows(predictModel);
    } catch (error) {
      toast(describeError(error));
    }
    return;
  }
  session = { ...session, exerciseId: id };
  editor.value = exercise.mode === "fix-the-proof" && exercise.attachment !== null ? exercise.attachment : "";
  session = editDraft(session, editor.value);
  proveArea.hidden = false;
  predictArea.hidden = true;
  render();
}

async function submitPredictions(): Promise<void> {
  if (predictModel === null || session.exerciseId === null && exerciseSelect.value === "") return;
  const problem = validationMessage(predictModel);
  if (problem !== null) {
    toast(problem);
    return;
  }
  if (inFlight) return;
  inFlight = true;
  predictSubmit.disabled = true;
  try {
    const response = await predictCheck(BASE, exerciseSelect.value, toPredictions(predictModel));
    predictResult.innerHTML = renderDiff(response, predictModel.sentences);
  } catch (error) {
    toast(describeError(error));
  } finally {
    inFlight = false;
    predictSubmit.disabled = false;
  }
}

async function boot(): Promise<void> {
  editor.addEventListener("input", () => {
    session = editDraft(session, editor.value);
    markerBox.innerHTML = renderMarkers(markers(session));
  });
  checkButton.addEventListener("click", () => void runCheck());
  predictSubmit.addEventListener("click", () => void submitPredictions());
  exerciseSelect.addEventListener("change", () => void enterExercise(exerciseSelect.value));
  document.querySelectorAll<HTMLButtonElement>("#palette button").forEach((button) => {
    button.addEventListener("click", () => {
      const symbol = button.dataset["symbol"] ?? button.textContent ?? "";
      const start = editor.selectionStart;
      const end = editor.selectionEnd;
      editor.setRangeText(symbol, start, end, "end");
      editor.focus();
      editor.dispatchEvent(new Event("input"));
    });
  });
  try {
    const exercises = await listExercises(BASE);
    for (const exercise of exercises) {
      const option = document.createElement("option");
      option.value = exercise.id;
      option.textContent = `${exercise.id} (${exercise.mode})`;
      exerciseSelect.appendChild(option);
    }
  } catch (error) {
    toast(describeError(error));
  }
  render();
}

void boot();
