/** DTO shapes of the core JSON projections, mirrored field by field.
 *  Complex numbers arrive as [re, im] pairs. */

export type Cplx = [number, number];

export interface Vec3Dto {
    x: number;
    y: number;
    z: number;
}

export interface SpinDto {
    number: number;
    isotope: string;
    label: string | null;
    coordinates: Vec3Dto | null;
}

export interface RotationDto {
    type: "euler_angles" | "angle_axis" | "quaternion" | "dcm";
    [key: string]: unknown;
}

export interface AmplitudeDto {
    type: "scalar" | "tensor" | "eigenvalues" | "aniso_asym" | "ax_rh" | "span_skew";
    rotation?: RotationDto | null;
    [key: string]: unknown;
}

export interface InteractionDto {
    id: number;
    kind: string;
    units: string;
    spin_1: number;
    spin_2: number | null;
    label: string | null;
    reference: string | null;
    amplitude: AmplitudeDto;
}

export interface SystemDto {
    spins: SpinDto[];
    interactions: InteractionDto[];
}

export interface SphericalDto {
    rank0: Cplx;
    rank1: Cplx[];
    rank2: Cplx[];
}

export interface BundleDto {
    matrix: number[][];
    eigenvalues: number[];
    eigenvectors: number[][];
    euler: { alpha: number; beta: number; gamma: number };
    angle_axis: { angle: number; axis: Vec3Dto };
    quaternion: { w: number; x: number; y: number; z: number };
    dcm: number[][];
    spherical: SphericalDto;
    haeberlen: { iso: number; aniso: number; asym: number } | null;
    ax_rh: { iso: number; ax: number; rh: number };
    span_skew: { iso: number; span: number; skew: number } | null;
    span_skew_kind: string;
    wigner: Cplx[][];
    editable: string[];
}

export interface EllipsoidDto {
    interaction_id: number;
    center: Vec3Dto;
    semi_axes: number[];
    orientation: { w: number; x: number; y: number; z: number };
    eigen_signs: boolean[];
    color_role: string;
    degenerate: boolean;
}

export interface LineDto {
    interaction_id: number;
    spin_1: number;
    spin_2: number;
    magnitude: number;
}

export interface SceneDto {
    mode: "nmr" | "epr";
    atoms: { id: number; element: string; isotope: string; coordinates: Vec3Dto }[];
    bonds: { a: number; b: number }[];
    ellipsoids: EllipsoidDto[];
    lines: LineDto[];
    coils: LineDto[];
    electrons: { id: number; position: Vec3Dto }[];
    scale_factors: Record<string, number>;
}

export interface ExportResultDto {
    target: string;
    regime: string;
    text: string;
}

export type EditableField =
    | "matrix" | "eigenvalues" | "spherical" | "euler" | "angle_axis_angle";

export type EditValue = number | number[] | number[][] | SphericalDto
    | { alpha: number; beta: number; gamma: number };
