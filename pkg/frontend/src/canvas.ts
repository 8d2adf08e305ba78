// Canvas painter for a SceneDrawing. Scene space is y-up with the origin
// at the canvas center; this is the only place that flips into pixels.

import type { Arrow, SceneDrawing } from "./scene.js";

const INCLINE_COLOR = "#3a3f47";
const BLOCK_COLOR = "#d9a021";
const BANNER_BG = "rgba(20, 20, 20, 0.75)";

function toPixels(ctx: CanvasRenderingContext2D, x: number, y: number) {
  return {
    px: ctx.canvas.width / 2 + x,
    py: ctx.canvas.height / 2 - y,
  };
}

function drawArrow(
  ctx: CanvasRenderingContext2D,
  originX: number,
  originY: number,
  arrow: Arrow,
): void {
  const rad = (arrow.angleDeg * Math.PI) / 180;
  const tipX = originX + arrow.lengthPx * Math.cos(rad);
  const tipY = originY + arrow.lengthPx * Math.sin(rad);
  const from = toPixels(ctx, originX, originY);
  const to = toPixels(ctx, tipX, tipY);

  ctx.strokeStyle = arrow.color;
  ctx.fillStyle = arrow.color;
  ctx.lineWidth = 2.5;
  ctx.beginPath();
  ctx.moveTo(from.px, from.py);
  ctx.lineTo(to.px, to.py);
  ctx.stroke();

  const heading = Math.atan2(to.py - from.py, to.px - from.px);
  const head = 8;
  ctx.beginPath();
  ctx.moveTo(to.px, to.py);
  ctx.lineTo(
    to.px - head * Math.cos(heading - 0.45),
    to.py - head * Math.sin(heading - 0.45),
  );
  ctx.lineTo(
    to.px - head * Math.cos(heading + 0.45),
    to.py - head * Math.sin(heading + 0.45),
  );
  ctx.closePath();
  ctx.fill();

  ctx.font = "11px sans-serif";
  ctx.fillText(arrow.label, to.px + 6, to.py - 4);
}

export function paint(ctx: CanvasRenderingContext2D, scene: SceneDrawing): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);

  if (scene.banner !== null) {
    ctx.fillStyle = BANNER_BG;
    ctx.fillRect(0, height / 2 - 24, width, 48);
    ctx.fillStyle = "#fff";
    ctx.font = "16px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(scene.banner, width / 2, height / 2 + 6);
    ctx.textAlign = "start";
    return;
  }

  // incline surface: a long line through the origin
  const rad = (scene.inclineAngleDeg * Math.PI) / 180;
  const span = Math.hypot(width, height);
  const a = toPixels(ctx, -span * Math.cos(rad), -span * Math.sin(rad));
  const b = toPixels(ctx, span * Math.cos(rad), span * Math.sin(rad));
  ctx.strokeStyle = INCLINE_COLOR;
  ctx.lineWidth = 3;
  ctx.beginPath();
  ctx.moveTo(a.px, a.py);
  ctx.lineTo(b.px, b.py);
  ctx.stroke();

  // block: rectangle sitting on the surface
  const center = toPixels(ctx, scene.block.x, scene.block.y);
  ctx.save();
  ctx.translate(center.px, center.py);
  ctx.rotate(-rad);
  ctx.fillStyle = BLOCK_COLOR;
  ctx.fillRect(
    -scene.block.halfLengthPx,
    -2 * scene.block.halfHeightPx,
    2 * scene.block.halfLengthPx,
    2 * scene.block.halfHeightPx,
  );
  ctx.restore();

  for (const arrow of scene.arrows) {
    drawArrow(ctx, scene.block.x, scene.block.y, arrow);
  }

  if (scene.pointer !== null) {
    const p = toPixels(ctx, scene.pointer.x, scene.pointer.y);
    ctx.fillStyle = scene.pointer.color;
    ctx.beginPath();
    ctx.arc(p.px, p.py, 6, 0, 2 * Math.PI);
    ctx.fill();
  }
}
